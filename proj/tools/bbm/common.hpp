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
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbm/dataset.hpp"
#include "bbm/transact.hpp"

namespace bbm::cli {

/// Dataset selection shared by every subcommand that reads instances.
struct DataOptions {
    std::string images;
    std::string labels;
    std::string csv;
    std::vector<std::size_t> classes;
    std::size_t folds = 0;  // 0: no split
    std::size_t fold = 0;
    std::string part;  // "train" or "test"; default depends on the command
};

void add_data_options(CLI::App& app, DataOptions& opts, const std::string& default_part);

/// Loads, restricts to the requested classes and applies the fold split.
LabeledDataset load_data(const DataOptions& opts);

/// --threads, falling back to BACKBONE_THREADS, then 1.
std::size_t resolve_threads(std::size_t flag);

/// "correct_0", "incorrect_1", "confusion_0_as_1".
std::string concept_stem(const ConceptId& id);

void require_file(const std::filesystem::path& path, const std::string& what);

/// Every *.csv table in `dir`, ordered by concept.
TableMap load_table_dir(const std::filesystem::path& dir);

std::vector<std::size_t> parse_size_list(const std::string& text);

}  // namespace bbm::cli
