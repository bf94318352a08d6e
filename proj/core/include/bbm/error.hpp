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

#include <stdexcept>
#include <string>
#include <string_view>

namespace bbm {

// Coarse failure classes. The CLI prints the category name as the first
// token of its one-line error message, so keep the names stable.
enum class ErrorCategory {
    usage,
    io,
    format,
    shape,
    non_finite,
    divergence,
    structural,
    capacity,
    infeasible,
    missing_artifact,
};

std::string_view category_name(ErrorCategory c);

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

}  // namespace bbm
