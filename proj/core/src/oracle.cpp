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

#include "bbm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <sstream>

#include "bbm/error.hpp"
#include "bbm/miner.hpp"

namespace bbm {

bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
    return a.size <= b.size && a.coverage_slack <= b.coverage_slack && a.overlap <= b.overlap && a != b;
}

namespace {

using Mask = std::uint32_t;
constexpr std::size_t kMaskBits = 24;  // 2^24 byte tables at most

// A subset of hidden neurons packed into machine words.
struct MaskGraph {
    std::vector<std::size_t> flat_of_bit;
    std::vector<Mask> adjacency;
    std::vector<Mask> layer_masks;

    std::size_t bits() const { return flat_of_bit.size(); }

    bool complete(Mask m) const {
        if (m == 0)
            return false;
        for (auto lm : layer_masks)
            if ((m & lm) == 0)
                return false;
        Mask seen = m & (~m + 1);
        Mask frontier = seen;
        while (frontier) {
            const auto v = static_cast<std::size_t>(std::countr_zero(frontier));
            frontier &= frontier - 1;
            const Mask next = adjacency[v] & m & ~seen;
            seen |= next;
            frontier |= next;
        }
        return seen == m;
    }

    Mask pack(const NeuronSet& set) const {
        Mask m = 0;
        for (std::size_t b = 0; b < bits(); ++b)
            if (set.test(flat_of_bit[b]))
                m |= Mask{1} << b;
        return m;
    }

    NeuronSet unpack(Mask m, std::size_t universe) const {
        NeuronSet set(universe);
        for (; m; m &= m - 1)
            set.set(flat_of_bit[static_cast<std::size_t>(std::countr_zero(m))]);
        return set;
    }
};

MaskGraph make_graph(const Connectivity& conn, const std::vector<std::size_t>& flats) {
    MaskGraph g;
    g.flat_of_bit = flats;
    g.adjacency.assign(flats.size(), 0);
    g.layer_masks.assign(conn.layout().layers(), 0);
    for (std::size_t a = 0; a < flats.size(); ++a) {
        g.layer_masks[conn.layout().layer_of(flats[a])] |= Mask{1} << a;
        for (std::size_t b = 0; b < flats.size(); ++b)
            if (conn.neighbours(flats[a]).test(flats[b]))
                g.adjacency[a] |= Mask{1} << b;
    }
    return g;
}

void check_universe(std::size_t size, const OracleLimits& limits, const char* what) {
    const auto cap = std::min(limits.max_universe, kMaskBits);
    if (size > cap)
        throw Error(ErrorCategory::capacity,
                    std::string(what) + ": " + std::to_string(size) + " neurons exceed the exact-search cap of " +
                        std::to_string(cap) + "; use the mining heuristic or a smaller network");
}

// has_complete[m]: m contains a complete subset.
std::vector<std::uint8_t> complete_closure(const MaskGraph& g) {
    const std::size_t total = std::size_t{1} << g.bits();
    std::vector<std::uint8_t> has(total, 0);
    for (std::size_t m = 1; m < total; ++m) {
        const auto mask = static_cast<Mask>(m);
        if (g.complete(mask)) {
            has[m] = 2;  // complete itself
            continue;
        }
        for (Mask rest = mask; rest; rest &= rest - 1) {
            if (has[mask & ~(rest & (~rest + 1))]) {
                has[m] = 1;
                break;
            }
        }
    }
    return has;
}

bool mask_lex_less(Mask a, Mask b) {
    while (a && b) {
        const auto x = std::countr_zero(a);
        const auto y = std::countr_zero(b);
        if (x != y)
            return x < y;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

struct Candidate {
    Mask mask = 0;
    std::size_t size = 0;
    std::size_t forgotten = 0;
};

class BackboneSearch {
public:
    BackboneSearch(const TableMap& tables, const LayeredNet& net, const RelaxationBudget& budget,
                   const OracleLimits& limits)
        : budget_(budget) {
        if (tables.empty())
            throw Error(ErrorCategory::usage, "no transaction tables given to the oracle");
        const Connectivity conn(net);
        const auto& layout = conn.layout();
        universe_ = layout.size();
        check_universe(universe_, limits, "oracle");
        std::vector<std::size_t> flats(universe_);
        for (std::size_t f = 0; f < universe_; ++f)
            flats[f] = f;
        graph_ = make_graph(conn, flats);
        closure_ = complete_closure(graph_);

        for (const auto& [id, table] : tables) {
            if (!(table.layout == layout))
                throw Error(ErrorCategory::shape, to_string(id) + ": table layout does not match the network");
            concepts_.push_back(id);
            std::vector<Mask> rows;
            for (const auto& row : table.rows)
                rows.push_back(graph_.pack(row));
            std::size_t allowed = budget.p1;
            if (auto it = budget.delta.find(id); it != budget.delta.end())
                allowed = std::min(allowed, it->second);
            candidates_.push_back(enumerate(rows, allowed));
        }
    }

    OracleSolution run() {
        OracleSolution sol;
        const std::size_t m = concepts_.size();
        for (const auto& c : candidates_)
            if (c.empty())
                return sol;
        suffix_min_.assign(m + 1, 0);
        std::size_t upper = 0;
        for (std::size_t i = m; i-- > 0;) {
            suffix_min_[i] = suffix_min_[i + 1] + candidates_[i].front().size;
            upper += candidates_[i].back().size;
        }
        chosen_.assign(m, nullptr);
        for (limit_ = suffix_min_[0]; limit_ <= upper; ++limit_) {
            if (dfs(0, 0, 0, 0)) {
                sol.feasible = true;
                for (std::size_t i = 0; i < m; ++i) {
                    sol.backbones[concepts_[i]] = graph_.unpack(chosen_[i]->mask, universe_);
                    sol.forgotten[concepts_[i]] = chosen_[i]->forgotten;
                    sol.point.size += chosen_[i]->size;
                    sol.point.coverage_slack += chosen_[i]->forgotten;
                    for (std::size_t j = 0; j < i; ++j)
                        sol.point.overlap +=
                            static_cast<std::size_t>(std::popcount(chosen_[i]->mask & chosen_[j]->mask));
                }
                return sol;
            }
        }
        return sol;
    }

private:
    // Inclusion-minimal complete sets leaving at most `allowed` rows uncovered.
    // A non-minimal set is never part of a minimum-size solution.
    std::vector<Candidate> enumerate(const std::vector<Mask>& rows, std::size_t allowed) const {
        const Mask full = static_cast<Mask>((std::uint64_t{1} << graph_.bits()) - 1);
        // Forgetting every row frees the backbone from the rows entirely.
        Mask base = rows.size() <= allowed ? full : 0;
        if (base == 0 && allowed == 0) {
            base = full;
            for (auto r : rows)
                base &= r;
        } else if (base == 0) {
            for (auto r : rows)
                base |= r;
        }
        std::vector<Candidate> out;
        for (Mask s = base; s; s = (s - 1) & base) {
            if (closure_[s] != 2)
                continue;
            bool minimal = true;
            for (Mask rest = s; rest && minimal; rest &= rest - 1)
                minimal = closure_[s & ~(rest & (~rest + 1))] == 0;
            if (!minimal)
                continue;
            std::size_t forgotten = 0;
            for (auto r : rows)
                forgotten += (r & s) != s;
            if (forgotten <= allowed)
                out.push_back({s, static_cast<std::size_t>(std::popcount(s)), forgotten});
        }
        std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
            if (a.size != b.size)
                return a.size < b.size;
            return mask_lex_less(a.mask, b.mask);
        });
        return out;
    }

    bool dfs(std::size_t i, std::size_t size, std::size_t forgotten, std::size_t shared) {
        if (i == concepts_.size())
            return gamma_ok();
        for (const auto& c : candidates_[i]) {
            if (size + c.size + suffix_min_[i + 1] > limit_)
                break;
            if (forgotten + c.forgotten > budget_.p1)
                continue;
            std::size_t extra = 0;
            for (std::size_t j = 0; j < i; ++j)
                extra += static_cast<std::size_t>(std::popcount(c.mask & chosen_[j]->mask));
            if (shared + extra > budget_.p2)
                continue;
            chosen_[i] = &c;
            if (dfs(i + 1, size + c.size, forgotten + c.forgotten, shared + extra))
                return true;
        }
        return false;
    }

    bool gamma_ok() const {
        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            auto it = budget_.gamma.find(concepts_[i]);
            if (it == budget_.gamma.end())
                continue;
            std::size_t mine = 0;
            for (std::size_t j = 0; j < concepts_.size(); ++j)
                if (j != i)
                    mine += static_cast<std::size_t>(std::popcount(chosen_[i]->mask & chosen_[j]->mask));
            if (mine > it->second)
                return false;
        }
        return true;
    }

    RelaxationBudget budget_;
    std::size_t universe_ = 0;
    MaskGraph graph_;
    std::vector<std::uint8_t> closure_;
    std::vector<ConceptId> concepts_;
    std::vector<std::vector<Candidate>> candidates_;
    std::vector<std::size_t> suffix_min_;
    std::vector<const Candidate*> chosen_;
    std::size_t limit_ = 0;
};

}  // namespace

OracleSolution solve_strict(const TableMap& tables, const LayeredNet& net, const OracleLimits& limits) {
    return BackboneSearch(tables, net, RelaxationBudget{}, limits).run();
}

OracleSolution solve_relaxed(const TableMap& tables, const LayeredNet& net, const RelaxationBudget& budget,
                             const OracleLimits& limits) {
    return BackboneSearch(tables, net, budget, limits).run();
}

std::vector<FrontEntry> pareto_front(const TransactionTable& table, const LayeredNet& net,
                                     const OracleLimits& limits) {
    const Connectivity conn(net);
    if (!(table.layout == conn.layout()))
        throw Error(ErrorCategory::shape, "table layout does not match the network");
    const std::size_t n = table.rows.size();

    // Neurons that never fire cannot help cover a row.
    NeuronSet active = table.layout.empty_set();
    for (const auto& row : table.rows)
        active |= row;
    const auto flats = members(active);
    check_universe(flats.size(), limits, "pareto front");
    const MaskGraph g = make_graph(conn, flats);
    const auto closure = complete_closure(g);

    std::vector<Mask> rows;
    for (const auto& row : table.rows)
        rows.push_back(g.pack(row));

    const std::size_t bits = g.bits();
    std::vector<std::size_t> best_slack(bits + 1, n + 1);
    std::vector<Mask> best_mask(bits + 1, 0);
    const std::size_t total = std::size_t{1} << bits;
    for (std::size_t m = 0; m < total; ++m) {
        const auto mask = static_cast<Mask>(m);
        std::size_t covered = 0;
        for (auto r : rows)
            covered += closure[mask & r] != 0;
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        const auto slack = n - covered;
        if (slack < best_slack[size] || (slack == best_slack[size] && mask_lex_less(mask, best_mask[size]))) {
            best_slack[size] = slack;
            best_mask[size] = mask;
        }
    }

    std::vector<FrontEntry> front;
    std::size_t floor = n + 1;
    for (std::size_t size = 0; size <= bits; ++size) {
        if (best_slack[size] >= floor)
            continue;
        floor = best_slack[size];
        FrontEntry e;
        e.point = {size, best_slack[size], 0};
        e.witness = g.unpack(best_mask[size], table.universe());
        e.trivial = size == 0;
        front.push_back(std::move(e));
    }
    return front;
}

ParetoPoint backbone_point(const Backbone& b, const TransactionTable& table) {
    ParetoPoint p;
    p.size = b.patterns.empty() ? 0 : b.neurons().count();
    p.coverage_slack = table.rows.size() - covered_rows(b, table);
    return p;
}

Cnf parse_dimacs(std::istream& in) {
    Cnf cnf;
    bool header = false;
    std::size_t declared_clauses = 0;
    std::vector<long> pending;
    std::string line;
    std::size_t line_no = 0;
    auto finish_clause = [&] {
        if (pending.size() != 3)
            throw Error(ErrorCategory::format, "line " + std::to_string(line_no) + ": clause has " +
                                                   std::to_string(pending.size()) + " literals, expected 3");
        Clause c;
        for (std::size_t i = 0; i < 3; ++i) {
            const auto v = static_cast<std::size_t>(pending[i] < 0 ? -pending[i] : pending[i]);
            if (v == 0 || v > cnf.num_vars)
                throw Error(ErrorCategory::format, "line " + std::to_string(line_no) + ": variable " +
                                                       std::to_string(v) + " out of range");
            c[i] = {v, pending[i] < 0};
        }
        cnf.clauses.push_back(c);
        pending.clear();
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok) || tok == "c")
            continue;
        if (tok == "%")
            break;
        if (tok == "p") {
            std::string fmt;
            if (!(ss >> fmt >> cnf.num_vars >> declared_clauses) || fmt != "cnf")
                throw Error(ErrorCategory::format, "line " + std::to_string(line_no) + ": bad problem line");
            header = true;
            continue;
        }
        if (!header)
            throw Error(ErrorCategory::format, "line " + std::to_string(line_no) + ": clause before 'p cnf' line");
        ss.clear();
        ss.str(line);
        long lit = 0;
        while (ss >> lit) {
            if (lit == 0)
                finish_clause();
            else
                pending.push_back(lit);
        }
        if (!ss.eof())
            throw Error(ErrorCategory::format, "line " + std::to_string(line_no) + ": non-integer token");
    }
    if (!pending.empty())
        throw Error(ErrorCategory::format, "last clause is not terminated by 0");
    if (!header)
        throw Error(ErrorCategory::format, "missing 'p cnf' line");
    if (declared_clauses != cnf.clauses.size())
        throw Error(ErrorCategory::format, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                               std::to_string(cnf.clauses.size()));
    return cnf;
}

ClbInstance from_3sat(const Cnf& cnf) {
    const std::size_t l = cnf.num_vars;
    ClbInstance inst;
    for (std::size_t i = 1; i <= l; ++i)
        inst.tags.push_back("a" + std::to_string(i));
    for (std::size_t i = 1; i <= l; ++i)
        inst.tags.push_back("b" + std::to_string(i));
    for (std::size_t i = 0; i < l; ++i) {
        inst.categories[0].push_back(inst.items.size());
        inst.items.push_back({i, l + i});
    }
    for (const auto& clause : cnf.clauses) {
        std::vector<std::size_t> item;
        for (const auto& lit : clause) {
            if (lit.var == 0 || lit.var > l)
                throw Error(ErrorCategory::format, "clause literal refers to variable " + std::to_string(lit.var) +
                                                       " of " + std::to_string(l));
            item.push_back(lit.negated ? l + lit.var - 1 : lit.var - 1);
        }
        std::sort(item.begin(), item.end());
        item.erase(std::unique(item.begin(), item.end()), item.end());
        inst.categories[1].push_back(inst.items.size());
        inst.items.push_back(std::move(item));
    }
    return inst;
}

std::optional<TagSelection> solve_strict(const ClbInstance& instance, const OracleLimits& limits) {
    const std::size_t t = instance.tags.size();
    check_universe(t, limits, "tag selection");
    std::array<std::vector<Mask>, 2> items;
    for (std::size_t c = 0; c < 2; ++c) {
        for (auto idx : instance.categories[c]) {
            Mask m = 0;
            for (auto tag : instance.items.at(idx)) {
                if (tag >= t)
                    throw Error(ErrorCategory::format, "item refers to an unknown tag");
                m |= Mask{1} << tag;
            }
            items[c].push_back(m);
        }
    }
    // Sets are disjoint, so a full split of the tags covers every choice
    // up to unused tags; bit set = second category.
    const Mask all = t == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << t) - 1);
    for (std::uint64_t a = 0; a <= all; ++a) {
        const auto second = static_cast<Mask>(a);
        const Mask first = all & ~second;
        const bool ok = std::all_of(items[0].begin(), items[0].end(), [&](Mask m) { return (m & first) != 0; }) &&
                        std::all_of(items[1].begin(), items[1].end(), [&](Mask m) { return (m & second) != 0; });
        if (!ok)
            continue;
        TagSelection sel;
        for (std::size_t c = 0; c < 2; ++c) {
            Mask used = 0;
            for (auto m : items[c])
                used |= m;
            const Mask side = (c == 0 ? first : second) & used;
            for (std::size_t b = 0; b < t; ++b)
                if (side & (Mask{1} << b))
                    sel.tags[c].push_back(b);
        }
        return sel;
    }
    return std::nullopt;
}

}  // namespace bbm
