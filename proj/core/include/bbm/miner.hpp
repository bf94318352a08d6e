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
#include <vector>

#include "bbm/netcore.hpp"
#include "bbm/neuron.hpp"
#include "bbm/transact.hpp"

namespace bbm {

/// |w| at or below this counts as a missing edge.
inline constexpr double kZeroWeightTolerance = 1e-12;

/// Upper bound on search-tree nodes per mining call.
inline constexpr std::size_t kDefaultCandidateCap = 1'000'000;

struct Pattern {
    NeuronSet neurons;
    std::size_t count = 0;  // supporting rows
    double support = 0.0;   // count / rows
    bool complete = false;
    double weight = 0.0;    // set by the backbone builder
};

/// Support descending, then size descending, then lexicographic neurons.
bool pattern_before(const Pattern& a, const Pattern& b);

/// Undirected adjacency between hidden neurons of consecutive layers joined
/// by a non-negligible weight.
class Connectivity {
public:
    explicit Connectivity(const LayeredNet& net, double tolerance = kZeroWeightTolerance);

    const Layout& layout() const noexcept { return layout_; }
    const NeuronSet& neighbours(std::size_t flat) const { return adjacency_.at(flat); }

private:
    Layout layout_;
    std::vector<NeuronSet> adjacency_;
};

/// Connected components of the subgraph induced by `neurons`, each as a set,
/// ordered by their lowest member.
std::vector<NeuronSet> connected_components(const NeuronSet& neurons, const Connectivity& conn);

bool is_layer_inclusive(const NeuronSet& neurons, const Layout& layout);

/// Layer inclusion plus connectivity of the induced subgraph.
bool is_complete_graph(const NeuronSet& neurons, const Connectivity& conn);
bool is_complete_graph(const NeuronSet& neurons, const LayeredNet& net);

/// Smallest row count meeting `minsup` on a table of `rows` rows.
std::size_t min_count_for(double minsup, std::size_t rows);

/// All maximal itemsets supported by at least `min_count` rows, with exact
/// counts, in pattern_before order. Throws Error(capacity) when the search
/// visits more than `cap` candidates.
std::vector<Pattern> frequent_patterns_count(const TransactionTable& table, std::size_t min_count,
                                             std::size_t cap = kDefaultCandidateCap);
std::vector<Pattern> frequent_patterns(const TransactionTable& table, double minsup,
                                       std::size_t cap = kDefaultCandidateCap);

/// Maximal complete frequent itemsets. Every complete frequent itemset lies
/// inside one layer-inclusive component of some maximal frequent itemset,
/// so these are the maximal such components.
std::vector<Pattern> complete_patterns(const TransactionTable& table, const Connectivity& conn,
                                       std::size_t min_count, std::size_t cap = kDefaultCandidateCap);

}  // namespace bbm
