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

#include "bbm/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "bbm/error.hpp"

namespace bbm {

void LabeledDataset::add(std::span<const double> x, std::size_t label) {
    if (x.size() != dim_)
        throw Error(ErrorCategory::shape, "instance has dimension " + std::to_string(x.size()) + ", expected " +
                                              std::to_string(dim_));
    if (label >= num_classes_)
        throw Error(ErrorCategory::format, "label " + std::to_string(label) + " is not below num_classes " +
                                               std::to_string(num_classes_));
    values_.insert(values_.end(), x.begin(), x.end());
    labels_.push_back(label);
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    LabeledDataset out(dim_, num_classes_);
    for (auto i : indices)
        out.add(instance(i), labels_.at(i));
    return out;
}

LabeledDataset LabeledDataset::select_classes(std::span<const std::size_t> classes) const {
    LabeledDataset out(dim_, classes.size());
    for (std::size_t i = 0; i < size(); ++i) {
        auto it = std::find(classes.begin(), classes.end(), labels_[i]);
        if (it != classes.end())
            out.add(instance(i), static_cast<std::size_t>(it - classes.begin()));
    }
    return out;
}

std::pair<LabeledDataset, LabeledDataset> LabeledDataset::fold_split(std::size_t folds, std::size_t fold) const {
    if (folds < 2 || fold >= folds)
        throw Error(ErrorCategory::usage, "fold " + std::to_string(fold) + " of " + std::to_string(folds) +
                                              " is not a valid split");
    LabeledDataset rest(dim_, num_classes_);
    LabeledDataset held(dim_, num_classes_);
    for (std::size_t i = 0; i < size(); ++i)
        (i % folds == fold ? held : rest).add(instance(i), labels_[i]);
    return {std::move(rest), std::move(held)};
}

LabeledDataset LabeledDataset::head(std::size_t count) const {
    LabeledDataset out(dim_, num_classes_);
    for (std::size_t i = 0; i < std::min(count, size()); ++i)
        out.add(instance(i), labels_[i]);
    return out;
}

namespace {

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4))
        throw Error(ErrorCategory::format, path.string() + ": truncated IDX header");
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

std::ifstream open_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCategory::missing_artifact, "cannot open " + path.string());
    return in;
}

}  // namespace

LabeledDataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
    auto img = open_binary(images);
    auto lab = open_binary(labels);
    if (read_be32(img, images) != 0x00000803)
        throw Error(ErrorCategory::format, images.string() + ": bad magic (expected 0x00000803)");
    if (read_be32(lab, labels) != 0x00000801)
        throw Error(ErrorCategory::format, labels.string() + ": bad magic (expected 0x00000801)");
    const auto n = read_be32(img, images);
    const auto rows = read_be32(img, images);
    const auto cols = read_be32(img, images);
    if (read_be32(lab, labels) != n)
        throw Error(ErrorCategory::format, "image and label counts differ");

    std::vector<unsigned char> label_bytes(n);
    if (!lab.read(reinterpret_cast<char*>(label_bytes.data()), n))
        throw Error(ErrorCategory::format, labels.string() + ": truncated label data");
    const std::size_t classes = n == 0 ? 0 : *std::max_element(label_bytes.begin(), label_bytes.end()) + 1u;

    const std::size_t dim = std::size_t{rows} * cols;
    LabeledDataset data(dim, classes);
    std::vector<unsigned char> pixels(dim);
    std::vector<double> x(dim);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!img.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(dim)))
            throw Error(ErrorCategory::format, images.string() + ": truncated image data");
        std::transform(pixels.begin(), pixels.end(), x.begin(), [](unsigned char p) { return p / 255.0; });
        data.add(x, label_bytes[i]);
    }
    return data;
}

LabeledDataset load_csv(const std::filesystem::path& path, std::size_t num_classes) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCategory::missing_artifact, "cannot open " + path.string());

    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> values;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (rows.empty() && labels.empty())
                continue;  // header
            throw Error(ErrorCategory::format, path.string() + ":" + std::to_string(line_no) + ": non-numeric cell");
        }
        if (values.size() < 2)
            throw Error(ErrorCategory::format, path.string() + ":" + std::to_string(line_no) + ": need features and a label");
        const double label = values.back();
        if (label < 0 || label != std::floor(label))
            throw Error(ErrorCategory::format, path.string() + ":" + std::to_string(line_no) + ": label must be a non-negative integer");
        values.pop_back();
        if (!rows.empty() && values.size() != rows.front().size())
            throw Error(ErrorCategory::shape, path.string() + ":" + std::to_string(line_no) + ": inconsistent column count");
        rows.push_back(std::move(values));
        labels.push_back(static_cast<std::size_t>(label));
    }
    if (rows.empty())
        throw Error(ErrorCategory::format, path.string() + ": no instances");
    if (num_classes == 0)
        num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
    LabeledDataset data(rows.front().size(), num_classes);
    for (std::size_t i = 0; i < rows.size(); ++i)
        data.add(rows[i], labels[i]);
    return data;
}

}  // namespace bbm
