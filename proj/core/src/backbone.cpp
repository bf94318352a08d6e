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

#include "bbm/backbone.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "bbm/error.hpp"
#include "bbm/parallel.hpp"

namespace bbm {

NeuronSet Backbone::neurons() const {
    if (patterns.empty())
        return {};
    NeuronSet all(patterns.front().neurons.size());
    for (const auto& p : patterns)
        all |= p.neurons;
    return all;
}

namespace {

double f_of(double tp, double fp, double fn) {
    const double denom = 2.0 * tp + fp + fn;
    return denom > 0.0 ? 2.0 * tp / denom : 0.0;
}

}  // namespace

FscoreState fscore(const NeuronSet& backbone, const TransactionTable& table) {
    FscoreState s;
    const NeuronSet empty(table.universe());
    const NeuronSet& b = backbone.size() == table.universe() ? backbone : empty;
    if (backbone.size() != table.universe() && backbone.any())
        throw Error(ErrorCategory::shape, "backbone universe does not match the table");
    for (const auto& row : table.rows) {
        const auto hit = (b & row).count();
        s.tp += static_cast<double>(hit);
        s.fp += static_cast<double>(b.count() - hit);
        s.fn += static_cast<double>(row.count() - hit);
    }
    s.f = f_of(s.tp, s.fp, s.fn);
    return s;
}

FscoreAccumulator::FscoreAccumulator(const TransactionTable& table)
    : column_counts_(table.universe(), 0),
      rows_(static_cast<double>(table.rows.size())),
      neurons_(table.layout.empty_set()) {
    for (const auto& row : table.rows) {
        for (auto f = row.find_first(); f != NeuronSet::npos; f = row.find_next(f))
            ++column_counts_[f];
        state_.fn += static_cast<double>(row.count());
    }
}

NeuronSet FscoreAccumulator::add(const NeuronSet& pattern) {
    NeuronSet novel = pattern - neurons_;
    for (auto f = novel.find_first(); f != NeuronSet::npos; f = novel.find_next(f)) {
        const auto c = static_cast<double>(column_counts_[f]);
        state_.tp += c;
        state_.fp += rows_ - c;
        state_.fn -= c;
    }
    neurons_ |= novel;
    state_.f = f_of(state_.tp, state_.fp, state_.fn);
    return novel;
}

FmmResult find_max_minsup(const TransactionTable& table, const Connectivity& conn, std::size_t cap) {
    const std::size_t n = table.rows.size();
    if (n == 0)
        throw Error(ErrorCategory::usage, "cannot mine an empty table (" + to_string(table.concept_id) + ")");
    for (std::size_t k = n; k >= 1; --k) {
        auto found = complete_patterns(table, conn, k, cap);
        if (!found.empty()) {
            FmmResult r;
            r.count = found.front().count;
            r.s_star = static_cast<double>(k) / static_cast<double>(n);
            r.seed = std::move(found.front());
            return r;
        }
    }
    throw Error(ErrorCategory::structural, "no complete pattern exists in " + to_string(table.concept_id) +
                                               " even at minsup 1/n; transactions must touch every layer");
}

FscoreRun fscore_threshold(const TransactionTable& table, const Connectivity& conn, const FscoreOptions& options) {
    const auto fmm = find_max_minsup(table, conn, options.candidate_cap);
    const std::size_t n = table.rows.size();

    FscoreRun run;
    run.backbone.concept_id = table.concept_id;
    run.backbone.max_minsup = fmm.s_star;
    auto& patterns = run.backbone.patterns;

    FscoreAccumulator acc(table);
    boost::dynamic_bitset<std::uint64_t> covered(n);
    std::size_t kept = 0;
    double kept_coverage = 0.0;
    double previous_f = -1.0;

    for (std::size_t k = fmm.count; k >= 1; --k) {
        for (auto& p : complete_patterns(table, conn, k, options.candidate_cap)) {
            const bool subsumed = std::any_of(patterns.begin(), patterns.end(),
                                              [&](const Pattern& q) { return p.neurons.is_subset_of(q.neurons); });
            if (subsumed)
                continue;
            acc.add(p.neurons);
            for (std::size_t r = 0; r < n; ++r)
                if (!covered.test(r) && p.neurons.is_subset_of(table.rows[r]))
                    covered.set(r);
            p.weight = static_cast<double>(p.count) / static_cast<double>(fmm.count);
            patterns.push_back(std::move(p));
        }

        IterationRecord rec;
        rec.min_count = k;
        rec.minsup = static_cast<double>(k) / static_cast<double>(n);
        rec.patterns = patterns.size();
        rec.incremental = acc.state();
        rec.neurons = acc.neurons();
        rec.coverage = static_cast<double>(covered.count()) / static_cast<double>(n);
        run.trace.push_back(rec);

        if (rec.incremental.f < previous_f && kept_coverage >= options.lambda) {
            patterns.resize(kept);
            run.terminated = true;
            run.returned_iteration = run.trace.size() - 2;
            return run;
        }
        previous_f = rec.incremental.f;
        kept = patterns.size();
        kept_coverage = rec.coverage;
    }
    run.returned_iteration = run.trace.size() - 1;
    run.coverage_shortfall = kept_coverage < options.lambda;
    return run;
}

std::size_t covered_rows(const Backbone& b, const TransactionTable& table) {
    std::size_t hits = 0;
    for (const auto& row : table.rows)
        hits += std::any_of(b.patterns.begin(), b.patterns.end(),
                            [&](const Pattern& p) { return p.neurons.is_subset_of(row); });
    return hits;
}

double coverage(const Backbone& b, const TransactionTable& table) {
    if (table.rows.empty())
        return 0.0;
    return static_cast<double>(covered_rows(b, table)) / static_cast<double>(table.rows.size());
}

double overlap(std::span<const Backbone> backbones, OverlapDenominator denominator) {
    std::vector<NeuronSet> sets;
    for (const auto& b : backbones)
        if (!b.patterns.empty())
            sets.push_back(b.neurons());
    if (sets.size() < 2)
        return 0.0;
    NeuronSet seen(sets.front().size());
    NeuronSet shared(sets.front().size());
    double total = 0.0;
    for (const auto& s : sets) {
        shared |= seen & s;
        seen |= s;
        total += static_cast<double>(s.count());
    }
    const double denom = denominator == OverlapDenominator::sum_of_sizes ? total : static_cast<double>(seen.count());
    return denom > 0.0 ? static_cast<double>(shared.count()) / denom : 0.0;
}

CollectiveResult build_collective(const TableMap& tables, const LayeredNet& net, const FscoreOptions& options,
                                  std::size_t threads) {
    if (tables.empty())
        throw Error(ErrorCategory::usage, "no transaction tables to mine");
    const Connectivity conn(net);
    std::vector<const TransactionTable*> work;
    for (const auto& [id, table] : tables)
        work.push_back(&table);

    std::vector<std::optional<FscoreRun>> runs(work.size());
    std::vector<std::string> failures(work.size());
    parallel_for(work.size(), threads, [&](std::size_t i) {
        try {
            runs[i] = fscore_threshold(*work[i], conn, options);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });

    CollectiveResult result;
    for (std::size_t i = 0; i < work.size(); ++i) {
        const auto& id = work[i]->concept_id;
        if (!runs[i]) {
            result.errors[id] = failures[i];
            continue;
        }
        result.collective.members[id] = runs[i]->backbone;
        result.runs.emplace(id, std::move(*runs[i]));
        result.order.push_back(id);
    }
    const auto m = result.order.size();
    result.overlap_matrix.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const std::array pair{result.collective.members.at(result.order[i]),
                                  result.collective.members.at(result.order[j])};
            result.overlap_matrix[i][j] = result.overlap_matrix[j][i] = overlap(pair);
        }
    }
    return result;
}

}  // namespace bbm
