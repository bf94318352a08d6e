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

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bbm/miner.hpp"
#include "bbm/transact.hpp"

namespace bbm {

/// Concept-level backbone: complete patterns in mining order.
struct Backbone {
    ConceptId concept_id;
    double max_minsup = 0.0;
    std::vector<Pattern> patterns;

    /// Union of all pattern neurons.
    NeuronSet neurons() const;
};

struct CollectiveBackbone {
    std::map<ConceptId, Backbone> members;
    std::size_t top_r = kDefaultTopR;  // threshold the member tables were built with
};

/// Neuron-level confusion counts of a backbone used as a predictor of which
/// neurons fire, summed over rows.
struct FscoreState {
    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    double f = 0.0;
};

FscoreState fscore(const NeuronSet& backbone, const TransactionTable& table);

/// Maintains an FscoreState while neurons are added, without rescanning the
/// table: a newly added neuron with row count c moves c rows from fn to tp
/// and adds n - c to fp.
class FscoreAccumulator {
public:
    explicit FscoreAccumulator(const TransactionTable& table);

    /// Adds every neuron of `pattern` not already present; returns the novel set.
    NeuronSet add(const NeuronSet& pattern);

    const FscoreState& state() const noexcept { return state_; }
    const NeuronSet& neurons() const noexcept { return neurons_; }

private:
    std::vector<std::size_t> column_counts_;
    double rows_ = 0.0;
    NeuronSet neurons_;
    FscoreState state_;
};

struct FmmResult {
    double s_star = 0.0;
    std::size_t count = 0;
    Pattern seed;
};

/// Lowers minsup one row at a time from 100% until a complete frequent
/// pattern exists. Throws Error(structural) if none exists at 1/n.
FmmResult find_max_minsup(const TransactionTable& table, const Connectivity& conn,
                          std::size_t cap = kDefaultCandidateCap);

struct FscoreOptions {
    double lambda = 0.0;  // minimum coverage of the returned backbone
    std::size_t candidate_cap = kDefaultCandidateCap;
};

/// One pass of the decrement loop.
struct IterationRecord {
    std::size_t min_count = 0;
    double minsup = 0.0;
    std::size_t patterns = 0;   // accumulated so far
    FscoreState incremental;    // from the accumulator
    NeuronSet neurons;          // union of the accumulated patterns
    double coverage = 0.0;
};

struct FscoreRun {
    Backbone backbone;
    std::vector<IterationRecord> trace;  // includes the terminating pass, if any
    std::size_t returned_iteration = 0;  // index into trace
    bool terminated = false;             // false: minsup ran out
    bool coverage_shortfall = false;
};

/// Grows the backbone from the max-minsup seed, re-mining at each lower
/// minsup and appending complete patterns not contained in earlier ones.
/// Stops the first time F strictly drops while the accumulation it would
/// return covers at least lambda, and returns that previous accumulation.
FscoreRun fscore_threshold(const TransactionTable& table, const Connectivity& conn, const FscoreOptions& options = {});

/// Rows containing at least one whole pattern of the backbone.
std::size_t covered_rows(const Backbone& b, const TransactionTable& table);
double coverage(const Backbone& b, const TransactionTable& table);

enum class OverlapDenominator { sum_of_sizes, union_size };

/// Neurons shared by at least two backbones over the summed (or union) size.
double overlap(std::span<const Backbone> backbones,
               OverlapDenominator denominator = OverlapDenominator::sum_of_sizes);

struct CollectiveResult {
    CollectiveBackbone collective;
    std::map<ConceptId, FscoreRun> runs;
    std::map<ConceptId, std::string> errors;
    std::vector<ConceptId> order;                     // rows/cols of overlap_matrix
    std::vector<std::vector<double>> overlap_matrix;  // pairwise, diagonal 0
};

/// Builds every concept independently; failures are recorded per concept.
CollectiveResult build_collective(const TableMap& tables, const LayeredNet& net, const FscoreOptions& options = {},
                                  std::size_t threads = 1);

}  // namespace bbm
