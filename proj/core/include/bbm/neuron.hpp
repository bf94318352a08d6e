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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace bbm {

/// A hidden neuron addressed by (0-based hidden layer, 0-based position).
struct NeuronId {
    std::size_t layer = 0;
    std::size_t index = 0;

    auto operator<=>(const NeuronId&) const = default;
};

/// "layer:index", the textual form used by every file format.
std::string to_string(NeuronId id);
NeuronId parse_neuron(std::string_view text);

/// Sets of hidden neurons are bitsets over the flattened hidden universe.
/// Flat order equals (layer, index) order, so iterating set bits visits
/// neurons lexicographically.
using NeuronSet = boost::dynamic_bitset<std::uint64_t>;

/// Sorted flat indices of the set bits.
std::vector<std::size_t> members(const NeuronSet& set);

/// Lexicographic comparison of the sorted member lists.
bool lex_less(const NeuronSet& a, const NeuronSet& b);

/// Hidden-layer geometry: widths plus flat-index bookkeeping.
class Layout {
public:
    Layout() = default;
    explicit Layout(std::vector<std::size_t> widths);

    std::size_t layers() const noexcept { return widths_.size(); }
    std::size_t width(std::size_t layer) const { return widths_.at(layer); }
    const std::vector<std::size_t>& widths() const noexcept { return widths_; }
    std::size_t offset(std::size_t layer) const { return offsets_.at(layer); }
    /// Total number of hidden neurons |R|.
    std::size_t size() const noexcept { return layer_of_.size(); }

    bool contains(NeuronId id) const noexcept {
        return id.layer < widths_.size() && id.index < widths_[id.layer];
    }
    std::size_t flat(NeuronId id) const;
    NeuronId id(std::size_t flat) const;
    std::size_t layer_of(std::size_t flat) const { return layer_of_.at(flat); }

    NeuronSet empty_set() const { return NeuronSet(size()); }
    NeuronSet make_set(std::span<const NeuronId> ids) const;
    /// Bits of every neuron in `layer`.
    const NeuronSet& layer_mask(std::size_t layer) const { return layer_masks_.at(layer); }
    std::vector<NeuronId> ids(const NeuronSet& set) const;
    std::string describe(const NeuronSet& set) const;

    bool operator==(const Layout& other) const { return widths_ == other.widths_; }

private:
    std::vector<std::size_t> widths_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> layer_of_;
    std::vector<NeuronSet> layer_masks_;
};

}  // namespace bbm
