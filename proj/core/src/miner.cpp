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

#include "bbm/miner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bbm/error.hpp"

namespace bbm {

bool pattern_before(const Pattern& a, const Pattern& b) {
    if (a.count != b.count)
        return a.count > b.count;
    const auto sa = a.neurons.count();
    const auto sb = b.neurons.count();
    if (sa != sb)
        return sa > sb;
    return lex_less(a.neurons, b.neurons);
}

Connectivity::Connectivity(const LayeredNet& net, double tolerance) : layout_(net.layout()) {
    adjacency_.assign(layout_.size(), layout_.empty_set());
    for (std::size_t l = 0; l + 1 < layout_.layers(); ++l) {
        const auto& w = net.weights.at(l + 1);
        for (std::size_t j = 0; j < layout_.width(l); ++j) {
            for (std::size_t k = 0; k < layout_.width(l + 1); ++k) {
                if (std::abs(w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))) > tolerance) {
                    const auto a = layout_.offset(l) + j;
                    const auto b = layout_.offset(l + 1) + k;
                    adjacency_[a].set(b);
                    adjacency_[b].set(a);
                }
            }
        }
    }
}

std::vector<NeuronSet> connected_components(const NeuronSet& neurons, const Connectivity& conn) {
    std::vector<NeuronSet> components;
    NeuronSet unvisited = neurons;
    std::vector<std::size_t> stack;
    for (auto start = unvisited.find_first(); start != NeuronSet::npos; start = unvisited.find_first()) {
        NeuronSet component(neurons.size());
        unvisited.reset(start);
        component.set(start);
        stack.assign(1, start);
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            const NeuronSet next = conn.neighbours(u) & unvisited;
            for (auto v = next.find_first(); v != NeuronSet::npos; v = next.find_next(v)) {
                unvisited.reset(v);
                component.set(v);
                stack.push_back(v);
            }
        }
        components.push_back(std::move(component));
    }
    return components;
}

bool is_layer_inclusive(const NeuronSet& neurons, const Layout& layout) {
    if (layout.layers() == 0)
        return false;
    for (std::size_t l = 0; l < layout.layers(); ++l)
        if (!neurons.intersects(layout.layer_mask(l)))
            return false;
    return true;
}

bool is_complete_graph(const NeuronSet& neurons, const Connectivity& conn) {
    if (neurons.size() != conn.layout().size())
        throw Error(ErrorCategory::shape, "pattern universe does not match the network");
    if (!is_layer_inclusive(neurons, conn.layout()))
        return false;
    return connected_components(neurons, conn).size() == 1;
}

bool is_complete_graph(const NeuronSet& neurons, const LayeredNet& net) {
    return is_complete_graph(neurons, Connectivity(net));
}

std::size_t min_count_for(double minsup, std::size_t rows) {
    if (!(minsup > 0.0) || minsup > 1.0)
        throw Error(ErrorCategory::usage, "minsup must lie in (0, 1]");
    const auto c = static_cast<std::size_t>(std::ceil(minsup * static_cast<double>(rows) - 1e-9));
    return std::max<std::size_t>(c, 1);
}

namespace {

using RowSet = boost::dynamic_bitset<std::uint64_t>;

// Depth-first search over the set-enumeration tree with vertical row masks.
// Prunes: items present in every row of the head are absorbed; if head plus
// the whole tail is frequent only that set can be maximal; if an item
// outside head and tail covers every head row, nothing below is maximal.
class MaximalMiner {
public:
    MaximalMiner(const TransactionTable& table, std::size_t min_count, std::size_t cap)
        : table_(table), min_count_(min_count), cap_(cap) {
        const std::size_t n = table.rows.size();
        std::vector<RowSet> tids(table.universe(), RowSet(n));
        for (std::size_t r = 0; r < n; ++r) {
            const auto& row = table.rows[r];
            for (auto f = row.find_first(); f != NeuronSet::npos; f = row.find_next(f))
                tids[f].set(r);
        }
        for (std::size_t f = 0; f < tids.size(); ++f) {
            if (tids[f].count() >= min_count_) {
                items_.push_back(f);
                tids_.push_back(std::move(tids[f]));
            }
        }
        // Ascending support keeps the tree narrow near the root.
        std::vector<std::size_t> order(items_.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return tids_[a].count() < tids_[b].count(); });
        std::vector<std::size_t> items;
        std::vector<RowSet> sorted_tids;
        for (auto i : order) {
            items.push_back(items_[i]);
            sorted_tids.push_back(std::move(tids_[i]));
        }
        items_ = std::move(items);
        tids_ = std::move(sorted_tids);
    }

    std::vector<Pattern> run() {
        if (table_.rows.empty() || items_.empty())
            return {};
        std::vector<std::size_t> tail(items_.size());
        std::iota(tail.begin(), tail.end(), 0);
        std::vector<char> in_head(items_.size(), 0);
        RowSet all(table_.rows.size());
        all.set();
        search(in_head, all, tail);

        std::sort(found_.begin(), found_.end(), pattern_before);
        found_.erase(std::unique(found_.begin(), found_.end(),
                                 [](const Pattern& a, const Pattern& b) { return a.neurons == b.neurons; }),
                     found_.end());
        return std::move(found_);
    }

private:
    void search(std::vector<char>& in_head, const RowSet& tid, const std::vector<std::size_t>& tail) {
        if (++visited_ > cap_)
            throw Error(ErrorCategory::capacity, "frequent pattern search exceeded " + std::to_string(cap_) +
                                                     " candidates; raise minsup or the candidate cap");
        const std::size_t tid_count = tid.count();
        std::vector<std::size_t> absorbed;
        std::vector<std::size_t> ext;
        std::vector<RowSet> ext_tids;
        std::vector<char> in_tail(items_.size(), 0);
        for (auto j : tail) {
            in_tail[j] = 1;
            RowSet rs = tid & tids_[j];
            const auto c = rs.count();
            if (c == tid_count) {
                absorbed.push_back(j);
            } else if (c >= min_count_) {
                ext.push_back(j);
                ext_tids.push_back(std::move(rs));
            }
        }
        for (std::size_t i = 0; i < items_.size(); ++i)
            if (!in_head[i] && !in_tail[i] && tid.is_subset_of(tids_[i]))
                return;

        for (auto j : absorbed)
            in_head[j] = 1;

        if (ext.empty()) {
            emit(in_head, tid);
        } else {
            RowSet hut = tid;
            for (const auto& rs : ext_tids)
                hut &= rs;
            if (hut.count() >= min_count_) {
                for (auto j : ext)
                    in_head[j] = 1;
                emit(in_head, hut);
                for (auto j : ext)
                    in_head[j] = 0;
            } else {
                for (std::size_t e = 0; e < ext.size(); ++e) {
                    in_head[ext[e]] = 1;
                    const std::vector<std::size_t> next_tail(ext.begin() + static_cast<std::ptrdiff_t>(e) + 1,
                                                             ext.end());
                    search(in_head, ext_tids[e], next_tail);
                    in_head[ext[e]] = 0;
                }
            }
        }
        for (auto j : absorbed)
            in_head[j] = 0;
    }

    void emit(const std::vector<char>& in_head, const RowSet& tid) {
        bool any = false;
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (in_head[i]) {
                any = true;
            } else if ((tid & tids_[i]).count() >= min_count_) {
                return;  // a frequent superset exists
            }
        }
        if (!any)
            return;
        Pattern p;
        p.neurons = table_.layout.empty_set();
        for (std::size_t i = 0; i < items_.size(); ++i)
            if (in_head[i])
                p.neurons.set(items_[i]);
        p.count = tid.count();
        p.support = static_cast<double>(p.count) / static_cast<double>(table_.rows.size());
        found_.push_back(std::move(p));
    }

    const TransactionTable& table_;
    std::size_t min_count_;
    std::size_t cap_;
    std::size_t visited_ = 0;
    std::vector<std::size_t> items_;
    std::vector<RowSet> tids_;
    std::vector<Pattern> found_;
};

}  // namespace

std::vector<Pattern> frequent_patterns_count(const TransactionTable& table, std::size_t min_count, std::size_t cap) {
    if (min_count == 0)
        throw Error(ErrorCategory::usage, "minimum count must be at least 1");
    return MaximalMiner(table, min_count, cap).run();
}

std::vector<Pattern> frequent_patterns(const TransactionTable& table, double minsup, std::size_t cap) {
    return frequent_patterns_count(table, min_count_for(minsup, table.rows.size()), cap);
}

std::vector<Pattern> complete_patterns(const TransactionTable& table, const Connectivity& conn, std::size_t min_count,
                                       std::size_t cap) {
    if (!(table.layout == conn.layout()))
        throw Error(ErrorCategory::shape, "table layout does not match the network");
    std::vector<NeuronSet> candidates;
    for (const auto& p : frequent_patterns_count(table, min_count, cap)) {
        for (auto& component : connected_components(p.neurons, conn))
            if (is_layer_inclusive(component, conn.layout()))
                candidates.push_back(std::move(component));
    }
    std::sort(candidates.begin(), candidates.end(), [](const NeuronSet& a, const NeuronSet& b) {
        if (a.count() != b.count())
            return a.count() > b.count();
        return lex_less(a, b);
    });
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<Pattern> out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        // Sorted by size descending, so only earlier entries can contain this one.
        bool subsumed = false;
        for (std::size_t j = 0; j < i && !subsumed; ++j)
            subsumed = candidates[i].is_proper_subset_of(candidates[j]);
        if (subsumed)
            continue;
        Pattern p;
        p.neurons = candidates[i];
        p.count = support_count(table, p.neurons);
        p.support = static_cast<double>(p.count) / static_cast<double>(table.rows.size());
        p.complete = true;
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), pattern_before);
    return out;
}

}  // namespace bbm
