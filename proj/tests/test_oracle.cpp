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
#include <sstream>

#include "bbm/error.hpp"
#include "bbm/oracle.hpp"
#include "oracles.hpp"

using namespace bbm;
using testing::toy_neuron;

namespace {

LayeredNet dense(std::vector<std::size_t> widths) {
    auto net = make_net(2, widths, 2);
    for (auto& w : net.weights)
        w.setConstant(1.0);
    return net;
}

TableMap single(const TransactionTable& t) {
    TableMap m;
    m.emplace(t.concept_id, t);
    return m;
}

ErrorCategory category_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.category();
    }
    FAIL("expected an error");
    return ErrorCategory::usage;
}

// Brute-force covered rows for one neuron set: some complete subset of
// (set & row) exists.
std::size_t ref_covered(const TransactionTable& t, const LayeredNet& net, std::uint64_t mask) {
    std::size_t covered = 0;
    for (const auto& row : t.rows) {
        std::uint64_t inside = 0;
        for (auto i : testing::to_members(row))
            if (mask >> i & 1)
                inside |= std::uint64_t{1} << i;
        bool found = false;
        for (std::uint64_t sub = inside; sub && !found; sub = (sub - 1) & inside)
            found = testing::ref_complete(testing::members_of(sub), net);
        covered += found;
    }
    return covered;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("strict: identical rows give one neuron per layer") {
    const std::vector<NeuronId> row{{0, 0}, {0, 2}, {1, 1}, {1, 2}};
    const auto t = synthetic_table(ConceptId::correct(0), Layout({3, 3}), {row, row, row});
    const auto net = dense({3, 3});
    const auto sol = solve_strict(single(t), net);
    REQUIRE(sol.feasible);
    CHECK(sol.point.size == 2);
    CHECK(sol.point.coverage_slack == 0);
    const auto& b = sol.backbones.at(t.concept_id);
    CHECK(b.is_subset_of(t.rows[0]));
    CHECK(testing::ref_check_solution(single(t), net, sol, {}).empty());
    // lexicographically smallest of the size-2 options
    CHECK(t.layout.describe(b) == "{0:0,1:1}");
}

TEST_CASE("strict: toy fixture has no backbone in every row") {
    const auto sol = solve_strict(single(testing::toy_table()), testing::toy_net());
    CHECK_FALSE(sol.feasible);
}

TEST_CASE("strict: orthogonality makes shared cores infeasible") {
    const Layout layout({2, 2});
    const std::vector<NeuronId> row{{0, 0}, {1, 0}};
    TableMap tables;
    tables.emplace(ConceptId::correct(0), synthetic_table(ConceptId::correct(0), layout, {row, row}));
    tables.emplace(ConceptId::correct(1), synthetic_table(ConceptId::correct(1), layout, {row}));
    const auto net = dense({2, 2});
    CHECK_FALSE(solve_strict(tables, net).feasible);

    RelaxationBudget budget;
    budget.p2 = 2;
    const auto sol = solve_relaxed(tables, net, budget);
    REQUIRE(sol.feasible);
    CHECK(sol.point.overlap == 2);
    CHECK(testing::ref_check_solution(tables, net, sol, budget).empty());

    budget.p2 = 1;
    CHECK_FALSE(solve_relaxed(tables, net, budget).feasible);
    budget.p1 = 1;
    const auto forgot = solve_relaxed(tables, net, budget);
    REQUIRE(forgot.feasible);
    CHECK(forgot.point.coverage_slack == 1);
}

TEST_CASE("relaxed: toy fixture with one forgotten row") {
    const auto tables = single(testing::toy_table());
    const auto net = testing::toy_net();
    RelaxationBudget budget;
    budget.p1 = 1;
    const auto sol = solve_relaxed(tables, net, budget);
    REQUIRE(sol.feasible);
    const auto& t = tables.begin()->second;
    const auto& b = sol.backbones.at(t.concept_id);
    std::vector<NeuronId> seed;
    for (int n : {2, 4, 5, 8})
        seed.push_back(toy_neuron(n));
    CHECK(b.is_subset_of(t.layout.make_set(seed)));
    CHECK(support_count(t, b) == 4);
    CHECK(sol.forgotten.at(t.concept_id) == 1);
    // the two-neuron core {n2, n5} already suffices
    CHECK(sol.point.size == 2);
    CHECK(t.layout.describe(b) == "{0:1,1:0}");
    CHECK(testing::ref_check_solution(tables, net, sol, budget).empty());
}

TEST_CASE("relaxed with a zero budget equals strict") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        std::mt19937_64 rng(seed);
        const Layout layout({3, 3});
        const auto net = testing::random_sparse_net(rng, 2, layout.widths(), 2, 0.3);
        TableMap tables;
        tables.emplace(ConceptId::correct(0), testing::random_table(rng, layout, 3, 0.7, ConceptId::correct(0)));
        tables.emplace(ConceptId::correct(1), testing::random_table(rng, layout, 3, 0.7, ConceptId::correct(1)));
        const auto a = solve_strict(tables, net);
        const auto b = solve_relaxed(tables, net, {});
        CHECK(a.feasible == b.feasible);
        if (a.feasible && b.feasible) {
            CHECK(a.point == b.point);
            CHECK(a.backbones == b.backbones);
        }
    }
}

TEST_CASE("relaxed solutions are valid and minimum") {
    std::size_t feasible = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        std::mt19937_64 rng(seed);
        const Layout layout(seed % 2 ? std::vector<std::size_t>{3, 3} : std::vector<std::size_t>{2, 3, 2});
        const auto net = testing::random_sparse_net(rng, 2, layout.widths(), 2, 0.35);
        TableMap tables;
        const std::size_t concepts = 1 + seed % 2;
        for (std::size_t c = 0; c < concepts; ++c)
            tables.emplace(ConceptId::correct(c),
                           testing::random_table(rng, layout, 2 + (seed + c) % 4, 0.55, ConceptId::correct(c)));
        RelaxationBudget budget;
        budget.p1 = rng() % 3;
        budget.p2 = rng() % 3;
        if (seed % 3 == 0)
            budget.delta[ConceptId::correct(0)] = rng() % 2;
        if (seed % 5 == 0)
            budget.gamma[ConceptId::correct(0)] = rng() % 2;
        const auto sol = solve_relaxed(tables, net, budget);
        const auto best = testing::ref_min_size(tables, net, budget);
        CAPTURE(seed);
        REQUIRE(sol.feasible == best.has_value());
        if (!sol.feasible)
            continue;
        ++feasible;
        CHECK(testing::ref_check_solution(tables, net, sol, budget) == "");
        CHECK(sol.point.size == *best);
    }
    CHECK(feasible > 30);
}

TEST_CASE("pareto front matches enumeration") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        std::mt19937_64 rng(seed);
        const Layout layout({3, 3});
        const auto net = testing::random_sparse_net(rng, 2, layout.widths(), 2, 0.3);
        const auto t = testing::random_table(rng, layout, 6, 0.5);
        const auto front = pareto_front(t, net);
        REQUIRE_FALSE(front.empty());
        CHECK(front.front().trivial);
        CHECK(front.front().point == ParetoPoint{0, t.size(), 0});

        // best uncovered count per size, by enumeration
        std::vector<std::size_t> best(layout.size() + 1, t.size());
        for (std::uint64_t mask = 0; mask < (1u << layout.size()); ++mask) {
            const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
            best[size] = std::min(best[size], t.size() - ref_covered(t, net, mask));
        }
        for (std::size_t i = 0; i < front.size(); ++i) {
            const auto& e = front[i];
            CHECK(e.witness.count() == e.point.size);
            CHECK(e.point.coverage_slack == best[e.point.size]);
            for (std::size_t s = 0; s < e.point.size; ++s)
                CHECK(best[s] > e.point.coverage_slack);
            for (std::size_t j = 0; j < front.size(); ++j)
                if (i != j)
                    CHECK_FALSE(dominates(front[j].point, e.point));
        }
        // every size whose best strictly improves on smaller sizes is on the front
        std::size_t floor = t.size() + 1, expected = 0;
        for (auto b : best)
            if (b < floor) {
                floor = b;
                ++expected;
            }
        CHECK(front.size() == expected);
    }
}

TEST_CASE("pareto front on a planted table") {
    const std::vector<NeuronId> row{{0, 1}, {1, 2}};
    const auto t = synthetic_table(ConceptId::correct(0), Layout({3, 3}), {row, row, row, row});
    const auto front = pareto_front(t, dense({3, 3}));
    REQUIRE(front.size() == 2);
    CHECK(front[0].point == ParetoPoint{0, 4, 0});
    CHECK(front[1].point == ParetoPoint{2, 0, 0});
    CHECK(t.layout.describe(front[1].witness) == "{0:1,1:2}");
}

TEST_CASE("dominance") {
    CHECK(dominates({1, 1, 0}, {2, 1, 0}));
    CHECK_FALSE(dominates({1, 1, 0}, {1, 1, 0}));
    CHECK_FALSE(dominates({1, 2, 0}, {2, 1, 0}));
}

TEST_CASE("3SAT reduction example") {
    Cnf cnf;
    cnf.num_vars = 3;
    cnf.clauses.push_back({Literal{1, false}, Literal{2, false}, Literal{3, true}});
    const auto inst = from_3sat(cnf);
    REQUIRE(inst.tags.size() == 6);
    CHECK(inst.tags[0] == "a1");
    CHECK(inst.tags[5] == "b3");
    REQUIRE(inst.categories[0].size() == 3);
    REQUIRE(inst.categories[1].size() == 1);
    CHECK(inst.items[inst.categories[0][1]] == std::vector<std::size_t>{1, 4});
    CHECK(inst.items[inst.categories[1][0]] == std::vector<std::size_t>{0, 1, 5});
    CHECK(solve_strict(inst).has_value());
}

TEST_CASE("3SAT reduction agrees with brute-force satisfiability") {
    std::size_t sat = 0, unsat = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t vars = 3 + seed % 4;
        const auto cnf = testing::random_3cnf(rng, vars, vars * 5 + seed % 7);
        const auto inst = from_3sat(cnf);
        const auto sel = solve_strict(inst);
        CAPTURE(seed);
        REQUIRE(sel.has_value() == testing::ref_sat(cnf));
        if (!sel) {
            ++unsat;
            continue;
        }
        ++sat;
        // disjoint, and every item meets its own side
        for (auto a : sel->tags[0])
            CHECK(std::find(sel->tags[1].begin(), sel->tags[1].end(), a) == sel->tags[1].end());
        for (std::size_t c = 0; c < 2; ++c)
            for (auto idx : inst.categories[c]) {
                const auto& item = inst.items[idx];
                CHECK(std::any_of(item.begin(), item.end(), [&](std::size_t tag) {
                    return std::find(sel->tags[c].begin(), sel->tags[c].end(), tag) != sel->tags[c].end();
                }));
            }
    }
    CHECK(sat > 20);
    CHECK(unsat > 20);
}

TEST_CASE("DIMACS parsing") {
    std::istringstream ok("c comment\np cnf 3 2\n1 -2 3 0\n-1 2\n-3 0\n%\n0\n");
    const auto cnf = parse_dimacs(ok);
    CHECK(cnf.num_vars == 3);
    REQUIRE(cnf.clauses.size() == 2);
    CHECK(cnf.clauses[0][1].var == 2);
    CHECK(cnf.clauses[0][1].negated);
    CHECK(cnf.clauses[1][2].negated);

    for (const char* bad : {"p cnf 3 1\n1 2 0\n", "p cnf 2 1\n1 2 3 0\n", "p cnf 3 2\n1 2 3 0\n",
                            "1 2 3 0\n", "p dnf 3 1\n1 2 3 0\n", "p cnf 3 1\n1 x 3 0\n", "p cnf 3 1\n1 2 3\n"}) {
        std::istringstream in(bad);
        CAPTURE(bad);
        CHECK(category_of([&] { parse_dimacs(in); }) == ErrorCategory::format);
    }
}

TEST_CASE("universe cap") {
    const Layout layout({12, 12});
    std::vector<NeuronId> row;
    for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t i = 0; i < 12; ++i)
            row.push_back({l, i});
    const auto t = synthetic_table(ConceptId::correct(0), layout, {row});
    const auto net = dense({12, 12});
    CHECK(category_of([&] { solve_strict(single(t), net); }) == ErrorCategory::capacity);
    CHECK(category_of([&] { pareto_front(t, net); }) == ErrorCategory::capacity);
    CHECK(solve_strict(single(t), net, {.max_universe = 24}).feasible);

    Cnf cnf;
    cnf.num_vars = 13;
    cnf.clauses.push_back({Literal{1, false}, Literal{2, false}, Literal{3, false}});
    CHECK(category_of([&] { solve_strict(from_3sat(cnf)); }) == ErrorCategory::capacity);
}

}
