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

#include <array>
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bbm/backbone.hpp"
#include "bbm/netcore.hpp"
#include "bbm/transact.hpp"

namespace bbm {

/// Exact solvers here enumerate subsets of the hidden universe, so they
/// refuse anything larger than max_universe neurons.
struct OracleLimits {
    std::size_t max_universe = 20;
};

/// Slack allowed by the relaxed formulation. Per-concept caps are optional;
/// a concept without an entry is bounded only by the totals.
struct RelaxationBudget {
    std::map<ConceptId, std::size_t> delta;  // forgotten rows per concept
    std::map<ConceptId, std::size_t> gamma;  // neurons shared with other concepts
    std::size_t p1 = 0;                      // total forgotten rows
    std::size_t p2 = 0;                      // total pairwise shared neurons
};

struct ParetoPoint {
    std::size_t size = 0;            // summed backbone sizes
    std::size_t coverage_slack = 0;  // rows left uncovered
    std::size_t overlap = 0;         // pairwise shared neurons

    auto operator<=>(const ParetoPoint&) const = default;
};

/// Weakly better in every objective and strictly better in one.
bool dominates(const ParetoPoint& a, const ParetoPoint& b);

struct OracleSolution {
    bool feasible = false;
    std::map<ConceptId, NeuronSet> backbones;
    std::map<ConceptId, std::size_t> forgotten;
    ParetoPoint point;
};

/// Minimum total size backbones that are contained in every row of their
/// concept, pairwise disjoint, layer-inclusive and connected.
OracleSolution solve_strict(const TableMap& tables, const LayeredNet& net, const OracleLimits& limits = {});

/// As solve_strict, but up to the budgeted rows may be left uncovered and
/// up to the budgeted neurons may be shared.
OracleSolution solve_relaxed(const TableMap& tables, const LayeredNet& net, const RelaxationBudget& budget,
                             const OracleLimits& limits = {});

struct FrontEntry {
    ParetoPoint point;
    NeuronSet witness;
    bool trivial = false;  // the empty backbone
};

/// Non-dominated (size, uncovered rows) trade-offs over every neuron set of
/// a single concept. A row counts as covered when the set contains a
/// complete subgraph lying inside the row. Sorted by size.
std::vector<FrontEntry> pareto_front(const TransactionTable& table, const LayeredNet& net,
                                     const OracleLimits& limits = {});

/// Where a mined backbone sits in objective space for its own table.
ParetoPoint backbone_point(const Backbone& b, const TransactionTable& table);

// 3SAT reduction -------------------------------------------------------------

struct Literal {
    std::size_t var = 0;  // 1-based
    bool negated = false;
};
using Clause = std::array<Literal, 3>;

struct Cnf {
    std::size_t num_vars = 0;
    std::vector<Clause> clauses;
};

/// DIMACS CNF restricted to clauses of exactly three literals.
Cnf parse_dimacs(std::istream& in);

/// Abstract tag-selection instance: items (tag sets) in two categories.
struct ClbInstance {
    std::vector<std::string> tags;
    std::vector<std::vector<std::size_t>> items;           // sorted tag indices
    std::array<std::vector<std::size_t>, 2> categories;    // item indices
};

/// Tags a_i (positive literal) and b_i (negative literal) per variable;
/// category 1 holds {a_i, b_i} per variable, category 2 one item per clause.
ClbInstance from_3sat(const Cnf& cnf);

struct TagSelection {
    std::array<std::vector<std::size_t>, 2> tags;
};

/// Disjoint tag sets, one per category, such that every item shares a tag
/// with its category's set. No layer or connectivity constraints apply.
std::optional<TagSelection> solve_strict(const ClbInstance& instance, const OracleLimits& limits = {.max_universe = 24});

}  // namespace bbm
