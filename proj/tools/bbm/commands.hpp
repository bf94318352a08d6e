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

#include <CLI11.hpp>

namespace bbm::cli {

struct GlobalOptions {
    std::size_t threads = 0;
};

void add_train(CLI::App& app, const GlobalOptions& global);
void add_extract(CLI::App& app, const GlobalOptions& global);
void add_mine(CLI::App& app, const GlobalOptions& global);
void add_oracle(CLI::App& app, const GlobalOptions& global);
void add_predict(CLI::App& app, const GlobalOptions& global);
void add_eap(CLI::App& app, const GlobalOptions& global);
void add_viz(CLI::App& app, const GlobalOptions& global);
void add_report(CLI::App& app, const GlobalOptions& global);

}  // namespace bbm::cli
