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

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "bbm/error.hpp"
#include "commands.hpp"

namespace {

int exit_code(bbm::ErrorCategory c) {
    return 2 + static_cast<int>(c);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concept backbones for layered networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with option values");
    app.set_version_flag("--version", "0.1.0");
    bbm::cli::GlobalOptions global;
    app.add_option("--threads", global.threads, "worker threads (else BACKBONE_THREADS, else 1)");

    bbm::cli::add_train(app, global);
    bbm::cli::add_extract(app, global);
    bbm::cli::add_mine(app, global);
    bbm::cli::add_oracle(app, global);
    bbm::cli::add_predict(app, global);
    bbm::cli::add_eap(app, global);
    bbm::cli::add_viz(app, global);
    bbm::cli::add_report(app, global);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << bbm::category_name(bbm::ErrorCategory::usage) << ": " << e.what() << '\n';
        return exit_code(bbm::ErrorCategory::usage);
    } catch (const bbm::Error& e) {
        std::cerr << bbm::category_name(e.category()) << ": " << e.what() << '\n';
        return exit_code(e.category());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << bbm::category_name(bbm::ErrorCategory::io) << ": " << e.what() << '\n';
        return exit_code(bbm::ErrorCategory::io);
    } catch (const std::exception& e) {
        std::cerr << "internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
