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

#include "bbm/transact.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bbm/error.hpp"
#include "bbm/parallel.hpp"

namespace bbm {

ConceptId ConceptId::confusion(std::size_t from, std::size_t to) {
    if (from == to)
        throw Error(ErrorCategory::usage, "confusion concept needs two distinct classes");
    return {Kind::confusion, from, to};
}

std::string to_string(const ConceptId& id) {
    switch (id.kind) {
    case ConceptId::Kind::correct: return "correct:" + std::to_string(id.cls);
    case ConceptId::Kind::incorrect: return "incorrect:" + std::to_string(id.cls);
    case ConceptId::Kind::confusion:
        return "confusion:" + std::to_string(id.cls) + "->" + std::to_string(id.predicted);
    }
    return {};
}

namespace {

std::size_t parse_index(std::string_view s, std::string_view whole) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(ErrorCategory::format, "bad concept id '" + std::string(whole) + "'");
    return v;
}

}  // namespace

ConceptId parse_concept(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw Error(ErrorCategory::format, "bad concept id '" + std::string(text) + "'");
    const auto kind = text.substr(0, colon);
    const auto rest = text.substr(colon + 1);
    if (kind == "correct")
        return ConceptId::correct(parse_index(rest, text));
    if (kind == "incorrect")
        return ConceptId::incorrect(parse_index(rest, text));
    if (kind == "confusion") {
        const auto arrow = rest.find("->");
        if (arrow == std::string_view::npos)
            throw Error(ErrorCategory::format, "bad concept id '" + std::string(text) + "'");
        const auto from = parse_index(rest.substr(0, arrow), text);
        const auto to = parse_index(rest.substr(arrow + 2), text);
        if (from == to)
            throw Error(ErrorCategory::format, "confusion concept '" + std::string(text) + "' maps a class to itself");
        return ConceptId::confusion(from, to);
    }
    throw Error(ErrorCategory::format, "unknown concept kind in '" + std::string(text) + "'");
}

std::vector<InstanceRecord> extract_transactions(const LayeredNet& net, const LabeledDataset& data, std::size_t r,
                                                 std::size_t threads, InfluenceMode mode) {
    if (data.empty())
        throw Error(ErrorCategory::usage, "empty dataset");
    if (data.dim() != net.input_dim)
        throw Error(ErrorCategory::shape, "dataset dimension " + std::to_string(data.dim()) +
                                              " does not match network input_dim " + std::to_string(net.input_dim));
    const Layout layout = net.layout();
    std::vector<InstanceRecord> records(data.size());
    parallel_for(data.size(), threads, [&](std::size_t i) {
        const auto pass = forward_with_activations(net, data.instance(i));
        records[i].transaction = top_r_threshold(influence(net, pass.hidden, mode), layout, r);
        records[i].label = data.label(i);
        records[i].predicted = pass.predicted();
    });
    return records;
}

TableMap route(const std::vector<InstanceRecord>& records, const Layout& layout) {
    TableMap tables;
    auto push = [&](const ConceptId& id, const Transaction& t) {
        auto [it, inserted] = tables.try_emplace(id);
        if (inserted) {
            it->second.concept_id = id;
            it->second.layout = layout;
        }
        it->second.rows.push_back(t);
    };
    for (const auto& rec : records) {
        if (rec.label == rec.predicted) {
            push(ConceptId::correct(rec.label), rec.transaction);
        } else {
            push(ConceptId::incorrect(rec.label), rec.transaction);
            push(ConceptId::confusion(rec.label, rec.predicted), rec.transaction);
        }
    }
    return tables;
}

TableMap build_tables(const LayeredNet& net, const LabeledDataset& data, std::size_t r, std::size_t threads,
                      InfluenceMode mode) {
    return route(extract_transactions(net, data, r, threads, mode), net.layout());
}

std::size_t support_count(const TransactionTable& table, const NeuronSet& pattern) {
    std::size_t hits = 0;
    for (const auto& row : table.rows)
        hits += pattern.is_subset_of(row);
    return hits;
}

double support(const TransactionTable& table, const NeuronSet& pattern) {
    if (table.rows.empty())
        return 0.0;
    return static_cast<double>(support_count(table, pattern)) / static_cast<double>(table.rows.size());
}

TransactionTable synthetic_table(ConceptId concept_id, Layout layout, const std::vector<std::vector<NeuronId>>& rows) {
    TransactionTable table{concept_id, std::move(layout), {}};
    for (const auto& row : rows)
        table.rows.push_back(table.layout.make_set(row));
    return table;
}

void write_table_csv(std::ostream& out, const TransactionTable& table) {
    out << "# concept=" << to_string(table.concept_id) << '\n';
    for (std::size_t f = 0; f < table.universe(); ++f)
        out << (f ? "," : "") << to_string(table.layout.id(f));
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t f = 0; f < table.universe(); ++f)
            out << (f ? "," : "") << (row.test(f) ? '1' : '0');
        out << '\n';
    }
}

TransactionTable read_table_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# concept=", 0) != 0)
        throw Error(ErrorCategory::format, source + ": missing '# concept=' metadata line");
    TransactionTable table;
    table.concept_id = parse_concept(line.substr(10));

    if (!std::getline(in, line))
        throw Error(ErrorCategory::format, source + ": missing header");
    std::vector<NeuronId> columns;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            columns.push_back(parse_neuron(cell));
    }
    // Columns must enumerate the layout in flat order.
    std::vector<std::size_t> widths;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& id = columns[c];
        if (id.layer == widths.size() && id.index == 0)
            widths.push_back(1);
        else if (!widths.empty() && id.layer + 1 == widths.size() && id.index == widths.back())
            ++widths.back();
        else
            throw Error(ErrorCategory::format, source + ": header column " + std::to_string(c + 1) + " ('" +
                                                   to_string(id) + "') is out of layer:index order");
    }
    table.layout = Layout(widths);

    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        Transaction row = table.layout.empty_set();
        std::size_t col = 0;
        for (std::size_t pos = 0; pos <= line.size(); ++col) {
            const auto comma = std::min(line.find(',', pos), line.size());
            const auto cell = std::string_view(line).substr(pos, comma - pos);
            if (col >= columns.size() || (cell != "0" && cell != "1"))
                throw Error(ErrorCategory::format, source + ":" + std::to_string(line_no) + ": expected " +
                                                       std::to_string(columns.size()) + " 0/1 cells");
            if (cell == "1")
                row.set(col);
            pos = comma + 1;
        }
        if (col != columns.size())
            throw Error(ErrorCategory::format, source + ":" + std::to_string(line_no) + ": expected " +
                                                   std::to_string(columns.size()) + " cells");
        table.rows.push_back(std::move(row));
    }
    return table;
}

void save_table(const std::filesystem::path& path, const TransactionTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCategory::io, "cannot write " + path.string());
    write_table_csv(out, table);
}

TransactionTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCategory::missing_artifact, "cannot open " + path.string());
    return read_table_csv(in, path.string());
}

}  // namespace bbm
