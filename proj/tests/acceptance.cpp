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

// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "bbm/applic.hpp"
#include "bbm/backbone.hpp"
#include "bbm/dataset.hpp"
#include "bbm/error.hpp"
#include "bbm/oracle.hpp"
#include "bbm/viz.hpp"
#include "oracles.hpp"

using namespace bbm;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1 -----------------------------------------------------------------------
void fmm_equivalence() {
    const auto t0 = Clock::now();
    std::size_t agree = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        const std::vector<std::vector<std::size_t>> shapes{{3, 3}, {4, 4}, {2, 3, 2}, {4, 4, 4}, {6, 6}, {3, 3, 3, 3}};
        const Layout layout(shapes[seed % shapes.size()]);
        const auto net = testing::random_dense_net(rng, 3, layout.widths(), 2);
        const std::size_t rows = 1 + rng() % 20;
        const auto table = seed % 2 ? testing::random_table(rng, layout, rows, 0.3 + 0.1 * static_cast<double>(seed % 5))
                                    : testing::planted_table(rng, layout, rows, 2, 0.2);
        const auto expected = static_cast<double>(testing::ref_max_complete_count(table, net)) /
                              static_cast<double>(table.size());
        const auto got = find_max_minsup(table, Connectivity(net));
        agree += got.s_star == expected;
        ++total;
    }
    const double secs = seconds_since(t0);
    report(1, agree == total && secs < 60.0,
           fmt("FMM s_star equals brute force on %zu/%zu tables in %.2f s", agree, total, secs));
}

// 2 and 6 ------------------------------------------------------------------
void incremental_and_coverage() {
    double worst = 0.0;
    std::size_t runs = 0, iterations = 0, non_monotone = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        std::mt19937_64 rng(2000 + seed);
        const Layout layout(seed % 2 ? std::vector<std::size_t>{5, 4, 3} : std::vector<std::size_t>{6, 6});
        const auto net = testing::random_sparse_net(rng, 3, layout.widths(), 2, 0.2);
        const auto table = testing::planted_table(rng, layout, 10 + rng() % 30, 3, 0.25);
        FscoreOptions opt;
        opt.lambda = seed % 3 == 0 ? 0.9 : 0.0;
        FscoreRun run;
        try {
            run = fscore_threshold(table, Connectivity(net), opt);
        } catch (const Error&) {
            continue;  // no complete pattern at all
        }
        ++runs;
        for (std::size_t i = 0; i < run.trace.size(); ++i) {
            const auto& rec = run.trace[i];
            const auto ref = testing::ref_fscore(testing::to_members(rec.neurons), table);
            worst = std::max({worst, std::abs(rec.incremental.tp - ref.tp), std::abs(rec.incremental.fp - ref.fp),
                              std::abs(rec.incremental.fn - ref.fn), std::abs(rec.incremental.f - ref.f)});
            ++iterations;
            if (i > 0 && rec.coverage < run.trace[i - 1].coverage)
                ++non_monotone;
        }
    }
    report(2, runs >= 50 && worst <= 1e-9,
           fmt("incremental counts match recomputation over %zu iterations of %zu runs, max error %.3g", iterations,
               runs, worst));
    report(6, runs >= 50 && non_monotone == 0,
           fmt("coverage nondecreasing in %zu runs (%zu decreases)", runs, non_monotone));
}

// 3 ------------------------------------------------------------------------
void pareto_check() {
    std::size_t instances = 0, dominated = 0;
    std::string example;
    for (std::uint64_t seed = 0; instances < 60 && seed < 500; ++seed) {
        std::mt19937_64 rng(3000 + seed);
        const Layout layout(seed % 2 ? std::vector<std::size_t>{4, 4} : std::vector<std::size_t>{3, 3, 3});
        const auto net = testing::random_sparse_net(rng, 3, layout.widths(), 2, 0.25);
        const auto table = testing::planted_table(rng, layout, 6 + rng() % 10, 2, 0.3);
        FscoreRun run;
        try {
            run = fscore_threshold(table, Connectivity(net));
        } catch (const Error&) {
            continue;
        }
        ++instances;
        const auto p = backbone_point(run.backbone, table);
        for (const auto& e : pareto_front(table, net)) {
            if (dominates(e.point, p)) {
                if (example.empty())
                    example = fmt("; e.g. seed %llu heuristic (%zu,%zu,%zu) vs front (%zu,%zu,%zu)",
                                  static_cast<unsigned long long>(3000 + seed), p.size, p.coverage_slack, p.overlap,
                                  e.point.size, e.point.coverage_slack, e.point.overlap);
                ++dominated;
                break;
            }
        }
    }
    report(3, instances >= 50 && dominated == 0,
           fmt("heuristic point non-dominated on %zu/%zu instances%s", instances - dominated, instances,
               example.c_str()));
}

// 4 ------------------------------------------------------------------------
void toy_fixture() {
    const auto t = testing::toy_table();
    const auto net = testing::toy_net();
    const Connectivity conn(net);
    std::vector<std::string> bad;
    auto expect = [&](bool ok, const char* what) {
        if (!ok)
            bad.push_back(what);
    };
    auto inter = t.rows[0], uni = t.rows[0];
    for (const auto& r : t.rows) {
        inter &= r;
        uni |= r;
    }
    expect(inter.none(), "intersection empty");
    expect(uni.count() == 8, "union has 8 neurons");
    std::vector<NeuronId> seed;
    for (int n : {2, 4, 5, 8})
        seed.push_back(testing::toy_neuron(n));
    const auto expected = t.layout.make_set(seed);
    const auto fmm = find_max_minsup(t, conn);
    expect(std::abs(fmm.s_star - 0.8) < 1e-12, "s_star 0.8");
    expect(fmm.seed.neurons == expected, "FMM pattern {n2,n4,n5,n8}");
    expect(std::abs(fscore(expected, t).f - 0.8) < 1e-12, "fscore 0.8");
    const auto run = fscore_threshold(t, conn);
    expect(std::abs(coverage(run.backbone, t) - 0.8) < 1e-12, "coverage 0.8");
    TableMap tables;
    tables.emplace(t.concept_id, t);
    expect(!solve_strict(tables, net).feasible, "strict infeasible");
    RelaxationBudget budget;
    budget.p1 = 1;
    const auto relaxed = solve_relaxed(tables, net, budget);
    expect(relaxed.feasible && testing::ref_check_solution(tables, net, relaxed, budget).empty(),
           "relaxed p1=1 feasible");
    std::string detail = "all toy-fixture checks hold";
    if (!bad.empty()) {
        detail = "failed:";
        for (const auto& b : bad)
            detail += " [" + b + "]";
    }
    report(4, bad.empty(), detail);
}

// 5 ------------------------------------------------------------------------
Cnf all_sign_patterns(std::size_t vars, std::size_t a, std::size_t b, std::size_t c) {
    Cnf cnf;
    cnf.num_vars = vars;
    for (int s = 0; s < 8; ++s)
        cnf.clauses.push_back({Literal{a, (s & 1) != 0}, Literal{b, (s & 2) != 0}, Literal{c, (s & 4) != 0}});
    return cnf;
}

void three_sat() {
    std::vector<Cnf> suite;
    std::mt19937_64 rng(5000);
    for (std::size_t i = 0; i < 240; ++i) {
        const std::size_t vars = 3 + i % 4;
        const double ratio = 3.0 + static_cast<double>(i % 5);  // spans the satisfiability threshold
        suite.push_back(testing::random_3cnf(rng, vars, static_cast<std::size_t>(ratio * static_cast<double>(vars))));
    }
    suite.push_back(all_sign_patterns(3, 1, 2, 3));
    suite.push_back(all_sign_patterns(6, 4, 5, 6));
    {
        auto cnf = all_sign_patterns(5, 1, 3, 5);
        cnf.clauses.push_back({Literal{2, false}, Literal{4, true}, Literal{1, false}});
        suite.push_back(cnf);
    }
    {
        // x1 forced true and false through padding variables
        Cnf cnf;
        cnf.num_vars = 3;
        for (int s = 0; s < 4; ++s) {
            cnf.clauses.push_back({Literal{1, false}, Literal{2, (s & 1) != 0}, Literal{3, (s & 2) != 0}});
            cnf.clauses.push_back({Literal{1, true}, Literal{2, (s & 1) != 0}, Literal{3, (s & 2) != 0}});
        }
        suite.push_back(cnf);
    }
    std::size_t agree = 0, sat = 0;
    bool hand_unsat = true;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const bool expected = testing::ref_sat(suite[i]);
        const bool got = solve_strict(from_3sat(suite[i])).has_value();
        agree += expected == got;
        sat += expected;
        if (i >= 240)
            hand_unsat = hand_unsat && !expected && !got;
    }
    report(5, agree == suite.size() && hand_unsat,
           fmt("tag-selection feasibility equals satisfiability on %zu/%zu formulas (%zu satisfiable)", agree,
               suite.size(), sat));
}

// 7 ------------------------------------------------------------------------
void mnist() {
    const auto t0 = Clock::now();
    const std::string dir = std::string(BBM_DATA_DIR) + "/mnist79/";
    LabeledDataset data;
    try {
        const std::size_t classes[] = {7, 9};
        data = load_idx(dir + "images-idx3-ubyte", dir + "labels-idx1-ubyte").select_classes(classes);
    } catch (const Error& e) {
        report(7, false, std::string("cannot load the digit subset: ") + e.what());
        return;
    }
    std::vector<EapRecord> pooled;
    std::string per_seed;
    for (std::uint64_t seed : {1, 2, 3}) {
        std::vector<EapRecord> mine;
        for (std::size_t fold = 0; fold < 5; ++fold) {
            const auto [train, test] = data.fold_split(5, fold);
            TrainOptions opt;
            opt.epochs = 10;
            opt.seed = seed;
            const auto net = train_mlp(train, opt);
            TableMap four;
            for (auto& [id, t] : build_tables(net, train, kDefaultTopR))
                if (id.kind != ConceptId::Kind::confusion)
                    four.emplace(id, std::move(t));
            auto built = build_collective(four, net);
            built.collective.top_r = kDefaultTopR;
            const auto rep = eap_evaluate(net, test, built.collective);
            mine.insert(mine.end(), rep.records.begin(), rep.records.end());
        }
        EapReport s;
        s.records = mine;
        summarise(s);
        per_seed += fmt(" seed%llu[net=%.4f bb=%.4f eap=%.4f prec=%.2f]", static_cast<unsigned long long>(seed),
                        s.network_accuracy, s.backbone_accuracy, s.eap_accuracy, s.flag_precision);
        pooled.insert(pooled.end(), mine.begin(), mine.end());
    }
    EapReport rep;
    rep.records = std::move(pooled);
    summarise(rep);
    const double secs = seconds_since(t0);
    const bool ok = rep.network_accuracy >= 0.95 && rep.backbone_accuracy >= 0.8 * rep.network_accuracy &&
                    rep.eap_accuracy >= rep.network_accuracy - 0.005 && rep.flag_precision >= 0.5 && secs < 600.0;
    report(7, ok,
           fmt("digits 7/9, %zu held-out predictions: net=%.4f backbone=%.4f eap=%.4f flag precision=%.3f "
               "(%zu/%zu) in %.0f s;",
               rep.instances, rep.network_accuracy, rep.backbone_accuracy, rep.eap_accuracy, rep.flag_precision,
               rep.flagged_true, rep.flagged_true + rep.flagged_false, secs) +
               per_seed);
}

// 8 ------------------------------------------------------------------------
void pso() {
    auto net = make_net(4, {2, 2}, 1);
    net.weights[0](0, 0) = 1.0;
    net.weights[0](1, 1) = 1.0;
    net.weights[1] = Eigen::MatrixXd::Identity(2, 2);
    net.weights[2].setConstant(1.0);
    const Layout layout({2, 2});
    Backbone b;
    Pattern p;
    p.neurons = layout.make_set(std::vector<NeuronId>{{0, 0}, {1, 0}});
    p.weight = 1.0;
    b.patterns.push_back(p);
    p.neurons = layout.make_set(std::vector<NeuronId>{{0, 1}, {1, 1}});
    p.weight = 0.5;
    b.patterns.push_back(p);

    PsoConfig cfg;  // 200 iterations
    const auto a = pso_maximize(net, b, full_whitelist(4), cfg);
    const auto again = pso_maximize(net, b, full_whitelist(4), cfg);
    const auto threaded = pso_maximize(net, b, full_whitelist(4), cfg, 4);
    bool monotone = true;
    for (std::size_t i = 1; i < a.trace.size(); ++i)
        monotone = monotone && a.trace[i] <= a.trace[i - 1];
    auto same = [](const PsoResult& x, const PsoResult& y) {
        return x.x.size() == y.x.size() && x.trace.size() == y.trace.size() &&
               std::memcmp(x.x.data(), y.x.data(), x.x.size() * sizeof(double)) == 0 &&
               std::memcmp(x.trace.data(), y.trace.data(), x.trace.size() * sizeof(double)) == 0;
    };
    const bool deterministic = same(a, again) && same(a, threaded);
    report(8, a.distance < 1e-3 && monotone && deterministic,
           fmt("final distance %.3g after %zu iterations, trace %s, reruns %s", a.distance, a.trace.size() - 1,
               monotone ? "monotone" : "NOT monotone", deterministic ? "byte-identical" : "DIFFER"));
}

}  // namespace

int main() {
    fmm_equivalence();
    incremental_and_coverage();
    pareto_check();
    toy_fixture();
    three_sat();
    mnist();
    pso();
    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
