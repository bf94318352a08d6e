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

#include "bbm/error.hpp"

namespace bbm {

std::string_view category_name(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::io: return "io";
    case ErrorCategory::format: return "format";
    case ErrorCategory::shape: return "shape";
    case ErrorCategory::non_finite: return "non-finite";
    case ErrorCategory::divergence: return "divergence";
    case ErrorCategory::structural: return "structural";
    case ErrorCategory::capacity: return "capacity";
    case ErrorCategory::infeasible: return "infeasible";
    case ErrorCategory::missing_artifact: return "missing-artifact";
    }
    return "unknown";
}

}  // namespace bbm
