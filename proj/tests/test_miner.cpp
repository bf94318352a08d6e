/*
Copyright 2026 The bbm Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <doctest.h>

#include <algorithm>
#include <random>

#include "bbm/error.hpp"
#include "bbm/miner.hpp"
#include "oracles.hpp"

using namespace bbm;
using testing::Members;

namespace {

std::vector<Members> as_members(const std::vector<Pattern>& ps) {
    std::vector<Members> out;
    for (const auto& p : ps)
        out.push_back(testing::to_members(p.neurons));
    std::sort(out.begin(), out.end());
    return out;
}

Layout random_layout(std::mt19937_64& rng, std::size_t max_total) {
    std::uniform_int_distribution<std::size_t> layers(2, 3);
    std::vector<std::size_t> widths(layers(rng));
    const std::size_t per = max_total / widths.size();
    std::uniform_int_distribution<std::size_t> width(1, per);
    for (auto& w : widths)
        w = width(rng);
    return Layout(widths);
}

}  // namespace

TEST_SUITE("miner") {

TEST_CASE("identical rows at minsup 1 give the row itself") {
    const std::vector<NeuronId> row{{0, 1}, {1, 0}, {1, 2}};
    const auto t = synthetic_table(ConceptId::correct(0), Layout({2, 3}), {row, row, row});
    const auto ps = frequent_patterns(t, 1.0);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].neurons == t.rows[0]);
    CHECK(ps[0].count == 3);
    CHECK(ps[0].support == 1.0);
}

TEST_CASE("toy fixture maximal patterns") {
    const auto t = testing::toy_table();
    const auto at80 = frequent_patterns(t, 0.8);
    REQUIRE(at80.size() == 1);
    CHECK(t.layout.describe(at80[0].neurons) == "{0:1,0:3,1:0,1:3}");
    CHECK(at80[0].support == doctest::Approx(0.8));

    const auto at20 = frequent_patterns(t, 0.2);
    CHECK(as_members(at20) == testing::ref_maximal_itemsets(t, 1));
    CHECK(at20.size() == 2);
    CHECK(at20[0].count == 4);
}

TEST_CASE("maximal itemsets match exhaustive enumeration") {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        std::mt19937_64 rng(seed);
        const auto layout = random_layout(rng, 12);
        std::uniform_int_distribution<std::size_t> rows(1, 20);
        std::uniform_real_distribution<double> density(0.2, 0.7);
        const auto t = seed % 2 ? testing::random_table(rng, layout, rows(rng), density(rng))
                                : testing::planted_table(rng, layout, rows(rng), 3, 0.2);
        for (std::size_t k = 1; k <= t.size(); k += 1 + t.size() / 4) {
            const auto got = frequent_patterns_count(t, k);
            REQUIRE_MESSAGE(as_members(got) == testing::ref_maximal_itemsets(t, k), "seed " << seed << " k " << k);
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].count == testing::ref_count(t, testing::to_members(got[i].neurons)));
                CHECK(got[i].support == doctest::Approx(double(got[i].count) / double(t.size())));
                if (i > 0)
                    CHECK_FALSE(pattern_before(got[i], got[i - 1]));
            }
        }
    }
}

TEST_CASE("every subset of a returned pattern is frequent") {
    std::mt19937_64 rng(99);
    const auto t = testing::planted_table(rng, Layout({4, 4}), 16, 2, 0.3);
    const std::size_t k = 5;
    for (const auto& p : frequent_patterns_count(t, k)) {
        const auto m = testing::to_members(p.neurons);
        for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << m.size()); ++sub) {
            Members s;
            for (std::size_t i = 0; i < m.size(); ++i)
                if (sub >> i & 1U)
                    s.push_back(m[i]);
            CHECK(testing::ref_count(t, s) >= k);
        }
    }
}

TEST_CASE("complete graph checks") {
    auto net = make_net(1, {2, 2}, 1);
    net.weights[1](0, 0) = 0.3;
    const auto layout = net.layout();
    auto set = [&](std::vector<NeuronId> ids) { return layout.make_set(ids); };
    CHECK(is_complete_graph(set({{0, 0}, {1, 0}}), net));
    CHECK_FALSE(is_complete_graph(set({{0, 0}, {0, 1}}), net));
    CHECK_FALSE(is_complete_graph(set({{0, 0}, {0, 1}, {1, 0}}), net));
    CHECK_FALSE(is_complete_graph(layout.empty_set(), net));

    net.weights[1](0, 0) = 1e-13;
    CHECK_FALSE(is_complete_graph(set({{0, 0}, {1, 0}}), net));
}

TEST_CASE("complete check agrees with a reference search") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const auto layout = random_layout(rng, 12);
        const auto net = testing::random_sparse_net(rng, 2, layout.widths(), 2, 0.6);
        const Connectivity conn(net);
        std::uniform_int_distribution<std::uint64_t> mask(1, (std::uint64_t{1} << layout.size()) - 1);
        for (int i = 0; i < 40; ++i) {
            const auto m = testing::members_of(mask(rng));
            const auto s = testing::to_set(m, layout.size());
            CHECK(is_complete_graph(s, conn) == testing::ref_complete(m, net));
            std::size_t total = 0;
            for (const auto& c : connected_components(s, conn))
                total += c.count();
            CHECK(total == m.size());
        }
    }
}

TEST_CASE("complete patterns cover every complete frequent set") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        const auto layout = random_layout(rng, 10);
        const auto net = testing::random_sparse_net(rng, 2, layout.widths(), 2, seed % 3 ? 0.5 : 0.0);
        const Connectivity conn(net);
        std::uniform_int_distribution<std::size_t> rows(1, 12);
        const auto t = testing::random_table(rng, layout, rows(rng), 0.5);
        std::uniform_int_distribution<std::size_t> kd(1, t.size());
        const std::size_t k = kd(rng);
        const auto got = complete_patterns(t, conn, k);
        for (const auto& p : got) {
            const auto m = testing::to_members(p.neurons);
            CHECK(testing::ref_complete(m, net));
            CHECK(p.count == testing::ref_count(t, m));
            CHECK(p.count >= k);
            CHECK(p.complete);
            for (const auto& q : got)
                if (&q != &p)
                    CHECK_FALSE(p.neurons.is_subset_of(q.neurons));
        }
        // every complete frequent set lies inside some returned pattern
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << layout.size()); ++mask) {
            const auto m = testing::members_of(mask);
            if (testing::ref_count(t, m) < k || !testing::ref_complete(m, net))
                continue;
            const auto s = testing::to_set(m, layout.size());
            const bool inside =
                std::any_of(got.begin(), got.end(), [&](const Pattern& p) { return s.is_subset_of(p.neurons); });
            REQUIRE_MESSAGE(inside, "seed " << seed);
        }
    }
}

TEST_CASE("candidate cap and minsup range") {
    std::mt19937_64 rng(4);
    const auto t = testing::random_table(rng, Layout({6, 6}), 20, 0.6);
    CHECK_THROWS_AS(frequent_patterns_count(t, 1, 3), Error);
    try {
        frequent_patterns_count(t, 1, 3);
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::capacity);
    }
    CHECK(min_count_for(0.8, 5) == 4);
    CHECK(min_count_for(0.81, 5) == 5);
    CHECK(min_count_for(0.01, 5) == 1);
    CHECK_THROWS_AS(min_count_for(0.0, 5), Error);
    CHECK_THROWS_AS(min_count_for(1.5, 5), Error);
}

}
