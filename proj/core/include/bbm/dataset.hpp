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
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace bbm {

/// Instances (row-major, fixed dimension) with class labels in [0, num_classes).
class LabeledDataset {
public:
    LabeledDataset() = default;
    LabeledDataset(std::size_t dim, std::size_t num_classes) : dim_(dim), num_classes_(num_classes) {}

    void add(std::span<const double> x, std::size_t label);

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t num_classes() const noexcept { return num_classes_; }

    std::span<const double> instance(std::size_t i) const {
        return {values_.data() + i * dim_, dim_};
    }
    std::size_t label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::size_t>& labels() const noexcept { return labels_; }

    LabeledDataset subset(std::span<const std::size_t> indices) const;

    /// Keeps only the listed classes and relabels them 0..k-1 in list order.
    LabeledDataset select_classes(std::span<const std::size_t> classes) const;

    /// Deterministic k-fold split: instance i is held out iff i % folds == fold.
    /// Returns (rest, held_out).
    std::pair<LabeledDataset, LabeledDataset> fold_split(std::size_t folds, std::size_t fold) const;

    /// First `count` instances (or all, if fewer).
    LabeledDataset head(std::size_t count) const;

private:
    std::size_t dim_ = 0;
    std::size_t num_classes_ = 0;
    std::vector<double> values_;
    std::vector<std::size_t> labels_;
};

/// MNIST IDX pair (magic 0x00000803 images, 0x00000801 labels). Pixels are
/// scaled to [0, 1]; num_classes is max label + 1.
LabeledDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// One instance per row, label in the last column. A non-numeric first line
/// is treated as a header. num_classes = 0 infers max label + 1.
LabeledDataset load_csv(const std::filesystem::path& path, std::size_t num_classes = 0);

}  // namespace bbm
