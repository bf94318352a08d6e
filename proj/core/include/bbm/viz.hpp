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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bbm/backbone.hpp"
#include "bbm/dataset.hpp"
#include "bbm/netcore.hpp"

namespace bbm {

struct PsoConfig {
    std::size_t swarm_size = 50;
    std::size_t iterations = 200;
    double inertia = 0.72;
    double cognitive = 1.49;
    double social = 1.49;
    double max_velocity = 0.5;  // per coordinate; positions live in [0, 1]
    std::uint64_t seed = 1;

    /// Throws Error(usage) on an unusable configuration.
    void validate() const;
};

/// Pixels the optimiser may change; all others stay 0.
struct Whitelist {
    std::vector<bool> mask;
    double fraction = 1.0;

    std::size_t count() const;
};

Whitelist full_whitelist(std::size_t dim);

/// The ceil(fraction * dim) pixels with the highest mean intensity over
/// instances of `cls`; ties go to the lower pixel index.
Whitelist pixel_whitelist(const LabeledDataset& data, std::size_t cls, double fraction = 0.4);

/// Each backbone neuron gets the largest weight of a pattern containing it,
/// every other neuron 0; the result is scaled to unit length.
std::vector<double> target_vector(const Backbone& b, const Layout& layout);

/// Euclidean distance between the unit-scaled influence vector of `x` and
/// `target`. A network that does not react at all scores distance 1.
double pso_objective(const LayeredNet& net, std::span<const double> x, std::span<const double> target);

struct PsoResult {
    std::vector<double> x;
    double distance = 0.0;
    std::vector<double> trace;  // best distance after init and after each iteration
};

/// Gradient-free search for an input whose influence vector looks like `b`.
/// Deterministic for a given config regardless of `threads`.
PsoResult pso_maximize(const LayeredNet& net, const Backbone& b, const Whitelist& whitelist, const PsoConfig& config,
                       std::size_t threads = 1);
PsoResult pso_maximize(const LayeredNet& net, std::span<const double> target, const Whitelist& whitelist,
                       const PsoConfig& config, std::size_t threads = 1);

struct GrayImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> pixels;  // row-major
};

/// Values clamped to [0, 1] and scaled to 8 bits.
GrayImage to_image(std::span<const double> x, std::size_t height, std::size_t width);

/// Binary PGM (P5).
void write_pgm(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_pgm(const std::filesystem::path& path);
void render(std::span<const double> x, std::size_t height, std::size_t width, const std::filesystem::path& path);

/// "correct_3.pgm", or "correct_3_p02_s0.800.pgm" for the third pattern
/// with support 0.8.
std::string render_name(const ConceptId& id);
std::string render_name(const ConceptId& id, std::size_t pattern, double support);

}  // namespace bbm
