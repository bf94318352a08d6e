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

#include "common.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "bbm/error.hpp"

namespace bbm::cli {

void add_data_options(CLI::App& app, DataOptions& opts, const std::string& default_part) {
    opts.part = default_part;
    app.add_option("--images", opts.images, "IDX image file")->group("Data");
    app.add_option("--labels", opts.labels, "IDX label file")->group("Data");
    app.add_option("--csv", opts.csv, "CSV dataset, label in the last column")->group("Data");
    app.add_option("--classes", opts.classes, "keep these labels, relabelled 0..k-1 in order")
        ->delimiter(',')
        ->group("Data");
    app.add_option("--folds", opts.folds, "number of folds (instance i is in fold i % k)")->group("Data");
    app.add_option("--fold", opts.fold, "held-out fold index")->group("Data");
    app.add_option("--part", opts.part, "which side of the split to use")
        ->check(CLI::IsMember({"train", "test", "all"}))
        ->group("Data");
}

LabeledDataset load_data(const DataOptions& opts) {
    LabeledDataset data;
    if (!opts.csv.empty()) {
        data = load_csv(opts.csv);
    } else if (!opts.images.empty() && !opts.labels.empty()) {
        data = load_idx(opts.images, opts.labels);
    } else {
        throw Error(ErrorCategory::usage, "give --csv or both --images and --labels");
    }
    if (!opts.classes.empty())
        data = data.select_classes(opts.classes);
    if (opts.folds == 0 || opts.part == "all")
        return data;
    auto [rest, held] = data.fold_split(opts.folds, opts.fold);
    return opts.part == "test" ? held : rest;
}

std::size_t resolve_threads(std::size_t flag) {
    if (flag > 0)
        return flag;
    if (const char* env = std::getenv("BACKBONE_THREADS")) {
        char* end = nullptr;
        const auto v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v == 0)
            throw Error(ErrorCategory::usage, std::string("BACKBONE_THREADS='") + env + "' is not a positive integer");
        return v;
    }
    return 1;
}

std::string concept_stem(const ConceptId& id) {
    switch (id.kind) {
    case ConceptId::Kind::correct:
        return "correct_" + std::to_string(id.cls);
    case ConceptId::Kind::incorrect:
        return "incorrect_" + std::to_string(id.cls);
    case ConceptId::Kind::confusion:
        break;
    }
    return "confusion_" + std::to_string(id.cls) + "_as_" + std::to_string(id.predicted);
}

void require_file(const std::filesystem::path& path, const std::string& what) {
    if (!std::filesystem::exists(path))
        throw Error(ErrorCategory::missing_artifact, what + " not found: " + path.string());
}

TableMap load_table_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw Error(ErrorCategory::missing_artifact, "table directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".csv")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    TableMap tables;
    for (const auto& f : files) {
        auto t = load_table(f);
        const auto id = t.concept_id;
        if (!tables.emplace(id, std::move(t)).second)
            throw Error(ErrorCategory::format, f.string() + ": second table for " + to_string(id));
    }
    if (tables.empty())
        throw Error(ErrorCategory::missing_artifact, "no .csv tables in " + dir.string());
    return tables;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoul(item, &used);
            if (used != item.size())
                throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw Error(ErrorCategory::usage, "'" + text + "' is not a comma-separated list of counts");
        }
    }
    return out;
}

}  // namespace bbm::cli
