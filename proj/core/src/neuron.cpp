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

#include "bbm/neuron.hpp"

#include <algorithm>
#include <charconv>

#include "bbm/error.hpp"

namespace bbm {

std::string to_string(NeuronId id) {
    return std::to_string(id.layer) + ":" + std::to_string(id.index);
}

NeuronId parse_neuron(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw Error(ErrorCategory::format, "neuron id '" + std::string(text) + "' is not of the form layer:index");
    NeuronId id;
    auto parse = [&](std::string_view part, std::size_t& out) {
        const auto* end = part.data() + part.size();
        auto [ptr, ec] = std::from_chars(part.data(), end, out);
        if (ec != std::errc{} || ptr != end || part.empty())
            throw Error(ErrorCategory::format, "neuron id '" + std::string(text) + "' has a non-numeric field");
    };
    parse(text.substr(0, colon), id.layer);
    parse(text.substr(colon + 1), id.index);
    return id;
}

std::vector<std::size_t> members(const NeuronSet& set) {
    std::vector<std::size_t> out;
    out.reserve(set.count());
    for (auto i = set.find_first(); i != NeuronSet::npos; i = set.find_next(i))
        out.push_back(i);
    return out;
}

bool lex_less(const NeuronSet& a, const NeuronSet& b) {
    auto i = a.find_first();
    auto j = b.find_first();
    while (i != NeuronSet::npos && j != NeuronSet::npos) {
        if (i != j)
            return i < j;
        i = a.find_next(i);
        j = b.find_next(j);
    }
    return i == NeuronSet::npos && j != NeuronSet::npos;
}

Layout::Layout(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
    std::size_t total = 0;
    for (std::size_t l = 0; l < widths_.size(); ++l) {
        offsets_.push_back(total);
        total += widths_[l];
        layer_of_.insert(layer_of_.end(), widths_[l], l);
    }
    for (std::size_t l = 0; l < widths_.size(); ++l) {
        NeuronSet mask(total);
        for (std::size_t j = 0; j < widths_[l]; ++j)
            mask.set(offsets_[l] + j);
        layer_masks_.push_back(std::move(mask));
    }
}

std::size_t Layout::flat(NeuronId id) const {
    if (!contains(id))
        throw Error(ErrorCategory::shape, "neuron " + to_string(id) + " is outside the hidden layout");
    return offsets_[id.layer] + id.index;
}

NeuronId Layout::id(std::size_t flat) const {
    const auto layer = layer_of_.at(flat);
    return {layer, flat - offsets_[layer]};
}

NeuronSet Layout::make_set(std::span<const NeuronId> ids) const {
    NeuronSet set(size());
    for (const auto& id : ids)
        set.set(flat(id));
    return set;
}

std::vector<NeuronId> Layout::ids(const NeuronSet& set) const {
    std::vector<NeuronId> out;
    for (auto i = set.find_first(); i != NeuronSet::npos; i = set.find_next(i))
        out.push_back(id(i));
    return out;
}

std::string Layout::describe(const NeuronSet& set) const {
    std::string out = "{";
    bool first = true;
    for (const auto& id : ids(set)) {
        if (!first)
            out += ",";
        out += to_string(id);
        first = false;
    }
    return out + "}";
}

}  // namespace bbm
