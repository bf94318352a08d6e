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

#include "bbm/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "bbm/error.hpp"
#include "bbm/parallel.hpp"

namespace bbm {

void PsoConfig::validate() const {
    if (swarm_size < 2)
        throw Error(ErrorCategory::usage, "pso swarm_size must be at least 2");
    if (!(inertia > 0.0 && inertia < 1.0))
        throw Error(ErrorCategory::usage, "pso inertia must lie in (0, 1)");
    if (!(cognitive >= 0.0) || !(social >= 0.0) || !std::isfinite(cognitive) || !std::isfinite(social))
        throw Error(ErrorCategory::usage, "pso cognitive and social coefficients must be finite and >= 0");
    if (!(max_velocity > 0.0) || !std::isfinite(max_velocity))
        throw Error(ErrorCategory::usage, "pso max_velocity must be positive");
}

std::size_t Whitelist::count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

Whitelist full_whitelist(std::size_t dim) {
    return {std::vector<bool>(dim, true), 1.0};
}

Whitelist pixel_whitelist(const LabeledDataset& data, std::size_t cls, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw Error(ErrorCategory::usage, "whitelist fraction must lie in (0, 1]");
    const std::size_t dim = data.dim();
    std::vector<double> mean(dim, 0.0);
    std::size_t seen = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.label(i) != cls)
            continue;
        const auto x = data.instance(i);
        for (std::size_t p = 0; p < dim; ++p)
            mean[p] += x[p];
        ++seen;
    }
    if (seen == 0)
        throw Error(ErrorCategory::usage, "class " + std::to_string(cls) + " has no instances");
    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mean[a] > mean[b]; });
    const auto keep = std::min(dim, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(dim) - 1e-9)));
    Whitelist w{std::vector<bool>(dim, false), fraction};
    for (std::size_t k = 0; k < keep; ++k)
        w.mask[order[k]] = true;
    return w;
}

std::vector<double> target_vector(const Backbone& b, const Layout& layout) {
    std::vector<double> t(layout.size(), 0.0);
    for (const auto& p : b.patterns) {
        if (p.neurons.size() != t.size())
            throw Error(ErrorCategory::shape, "backbone does not match the network layout");
        for (auto f : members(p.neurons))
            t[f] = std::max(t[f], p.weight);
    }
    const double norm = std::sqrt(std::inner_product(t.begin(), t.end(), t.begin(), 0.0));
    if (norm > 0.0)
        for (auto& v : t)
            v /= norm;
    return t;
}

double pso_objective(const LayeredNet& net, std::span<const double> x, std::span<const double> target) {
    const auto pass = forward_with_activations(net, x);
    auto infl = influence(net, pass.hidden).values;
    if (infl.size() != target.size())
        throw Error(ErrorCategory::shape, "target has " + std::to_string(target.size()) + " entries, network has " +
                                              std::to_string(infl.size()) + " hidden neurons");
    const double norm = std::sqrt(std::inner_product(infl.begin(), infl.end(), infl.begin(), 0.0));
    double d = 0.0;
    for (std::size_t i = 0; i < infl.size(); ++i) {
        const double v = norm > 0.0 ? infl[i] / norm : 0.0;
        d += (v - target[i]) * (v - target[i]);
    }
    return std::sqrt(d);
}

PsoResult pso_maximize(const LayeredNet& net, const Backbone& b, const Whitelist& whitelist, const PsoConfig& config,
                       std::size_t threads) {
    const auto target = target_vector(b, net.layout());
    return pso_maximize(net, target, whitelist, config, threads);
}

PsoResult pso_maximize(const LayeredNet& net, std::span<const double> target, const Whitelist& whitelist,
                       const PsoConfig& config, std::size_t threads) {
    config.validate();
    const std::size_t dim = net.input_dim;
    if (whitelist.mask.size() != dim)
        throw Error(ErrorCategory::shape, "whitelist has " + std::to_string(whitelist.mask.size()) +
                                              " pixels, network expects " + std::to_string(dim));
    std::vector<std::size_t> free;
    for (std::size_t p = 0; p < dim; ++p)
        if (whitelist.mask[p])
            free.push_back(p);

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = config.swarm_size;
    std::vector<std::vector<double>> pos(n, std::vector<double>(dim, 0.0));
    std::vector<std::vector<double>> vel(n, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (auto p : free) {
            pos[i][p] = unit(rng);
            vel[i][p] = (2.0 * unit(rng) - 1.0) * config.max_velocity;
        }
    }
    std::vector<double> fit(n, 0.0);
    auto evaluate = [&] {
        parallel_for(n, threads, [&](std::size_t i) { fit[i] = pso_objective(net, pos[i], target); });
    };
    evaluate();
    auto personal = pos;
    auto personal_fit = fit;
    std::size_t g = static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
    std::vector<double> global = pos[g];
    double global_fit = fit[g];

    PsoResult result;
    result.trace.push_back(global_fit);
    for (std::size_t it = 0; it < config.iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            for (auto p : free) {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                double v = config.inertia * vel[i][p] + config.cognitive * r1 * (personal[i][p] - pos[i][p]) +
                           config.social * r2 * (global[p] - pos[i][p]);
                v = std::clamp(v, -config.max_velocity, config.max_velocity);
                vel[i][p] = v;
                pos[i][p] = std::clamp(pos[i][p] + v, 0.0, 1.0);
            }
        }
        evaluate();
        for (std::size_t i = 0; i < n; ++i) {
            if (fit[i] < personal_fit[i]) {
                personal_fit[i] = fit[i];
                personal[i] = pos[i];
            }
            if (fit[i] < global_fit) {
                global_fit = fit[i];
                global = pos[i];
            }
        }
        result.trace.push_back(global_fit);
    }
    result.x = std::move(global);
    result.distance = global_fit;
    return result;
}

GrayImage to_image(std::span<const double> x, std::size_t height, std::size_t width) {
    if (height == 0 || width == 0 || height * width != x.size())
        throw Error(ErrorCategory::shape, "image shape " + std::to_string(height) + "x" + std::to_string(width) +
                                              " does not hold " + std::to_string(x.size()) + " values");
    GrayImage img{height, width, std::vector<std::uint8_t>(x.size())};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = std::isfinite(x[i]) ? std::clamp(x[i], 0.0, 1.0) : 0.0;
        img.pixels[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCategory::io, "cannot write " + path.string());
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
    if (!out)
        throw Error(ErrorCategory::io, "write failed: " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCategory::io, "cannot open " + path.string());
    auto token = [&] {
        std::string t;
        while (in >> std::ws && in.peek() == '#') {
            std::string skip;
            std::getline(in, skip);
        }
        in >> t;
        return t;
    };
    if (token() != "P5")
        throw Error(ErrorCategory::format, path.string() + ": not a binary PGM");
    GrayImage img;
    std::size_t maxval = 0;
    try {
        img.width = std::stoul(token());
        img.height = std::stoul(token());
        maxval = std::stoul(token());
    } catch (const std::exception&) {
        throw Error(ErrorCategory::format, path.string() + ": bad PGM header");
    }
    if (maxval != 255)
        throw Error(ErrorCategory::format, path.string() + ": only 8-bit PGM is supported");
    in.get();
    img.pixels.resize(img.width * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw Error(ErrorCategory::format, path.string() + ": truncated pixel data");
    return img;
}

void render(std::span<const double> x, std::size_t height, std::size_t width, const std::filesystem::path& path) {
    write_pgm(path, to_image(x, height, width));
}

std::string render_name(const ConceptId& id) {
    std::string s;
    switch (id.kind) {
    case ConceptId::Kind::correct:
        s = "correct_" + std::to_string(id.cls);
        break;
    case ConceptId::Kind::incorrect:
        s = "incorrect_" + std::to_string(id.cls);
        break;
    case ConceptId::Kind::confusion:
        s = "confusion_" + std::to_string(id.cls) + "_as_" + std::to_string(id.predicted);
        break;
    }
    return s + ".pgm";
}

std::string render_name(const ConceptId& id, std::size_t pattern, double support) {
    auto base = render_name(id);
    base.resize(base.size() - 4);
    char buf[48];
    std::snprintf(buf, sizeof buf, "_p%02zu_s%.3f.pgm", pattern, support);
    return base + buf;
}

}  // namespace bbm
