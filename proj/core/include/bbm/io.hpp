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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bbm/applic.hpp"
#include "bbm/backbone.hpp"
#include "bbm/netcore.hpp"

namespace bbm {

// JSON artifacts. Loaders throw Error(missing-artifact) for absent files,
// Error(format) for malformed ones and Error(shape) for inconsistent ones.

/// {input_dim, hidden_widths, output_dim, activation, weights, biases};
/// weights[l][j][k] as in LayeredNet. Doubles round-trip exactly.
void save_net(const std::filesystem::path& path, const LayeredNet& net);
LayeredNet load_net(const std::filesystem::path& path);
std::string net_to_json(const LayeredNet& net);
LayeredNet net_from_json(const std::string& text, const std::string& source = "<string>");

/// {concept, layout, max_minsup, patterns: [{neurons, count, support, weight}]}
void save_backbone(const std::filesystem::path& path, const Backbone& b, const Layout& layout);
Backbone load_backbone(const std::filesystem::path& path, Layout* layout = nullptr);

/// {top_r, layout, members: [backbone, ...]}
void save_collective(const std::filesystem::path& path, const CollectiveBackbone& c, const Layout& layout);
CollectiveBackbone load_collective(const std::filesystem::path& path, Layout* layout = nullptr);

/// Summary counts and accuracies as JSON.
void write_eap_summary(std::ostream& out, const EapReport& report);
/// id,label,net_pred,backbone_pred,flagged,corrected_pred
void write_eap_csv(std::ostream& out, const EapReport& report);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace bbm
