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

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bbm/dataset.hpp"
#include "bbm/netcore.hpp"
#include "bbm/neuron.hpp"

namespace bbm {

/// A group of instances a backbone summarises.
struct ConceptId {
    enum class Kind { correct, incorrect, confusion };

    Kind kind = Kind::correct;
    std::size_t cls = 0;        // the true label
    std::size_t predicted = 0;  // only meaningful for confusion

    static ConceptId correct(std::size_t c) { return {Kind::correct, c, c}; }
    static ConceptId incorrect(std::size_t c) { return {Kind::incorrect, c, 0}; }
    static ConceptId confusion(std::size_t from, std::size_t to);

    auto operator<=>(const ConceptId&) const = default;
};

/// "correct:3", "incorrect:3", "confusion:3->5".
std::string to_string(const ConceptId& id);
ConceptId parse_concept(std::string_view text);

/// The neurons one instance activates.
using Transaction = NeuronSet;

struct TransactionTable {
    ConceptId concept_id;
    Layout layout;
    std::vector<Transaction> rows;

    std::size_t size() const noexcept { return rows.size(); }
    std::size_t universe() const noexcept { return layout.size(); }
};

using TableMap = std::map<ConceptId, TransactionTable>;

/// Per-instance outcome of the activation pipeline.
struct InstanceRecord {
    Transaction transaction;
    std::size_t label = 0;
    std::size_t predicted = 0;
};

std::vector<InstanceRecord> extract_transactions(const LayeredNet& net, const LabeledDataset& data, std::size_t r,
                                                 std::size_t threads = 1,
                                                 InfluenceMode mode = InfluenceMode::outgoing);

/// Routes records into correct(label) / incorrect(label), plus
/// confusion(label->pred) for mispredictions. Concepts without rows are
/// absent from the map.
TableMap route(const std::vector<InstanceRecord>& records, const Layout& layout);

TableMap build_tables(const LayeredNet& net, const LabeledDataset& data, std::size_t r, std::size_t threads = 1,
                      InfluenceMode mode = InfluenceMode::outgoing);

/// Rows containing `pattern` as a subset.
std::size_t support_count(const TransactionTable& table, const NeuronSet& pattern);
double support(const TransactionTable& table, const NeuronSet& pattern);

/// Hand-written table, bypassing any network.
TransactionTable synthetic_table(ConceptId concept_id, Layout layout,
                                 const std::vector<std::vector<NeuronId>>& rows);

/// CSV: a `# concept=<id>` line, a header of `layer:index` columns, then
/// one 0/1 row per transaction.
void write_table_csv(std::ostream& out, const TransactionTable& table);
TransactionTable read_table_csv(std::istream& in, const std::string& source = "<stream>");
void save_table(const std::filesystem::path& path, const TransactionTable& table);
TransactionTable load_table(const std::filesystem::path& path);

}  // namespace bbm
