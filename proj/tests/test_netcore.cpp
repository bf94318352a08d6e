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

#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "bbm/error.hpp"
#include "bbm/io.hpp"
#include "bbm/netcore.hpp"
#include "oracles.hpp"

using namespace bbm;

namespace {

ErrorCategory category_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.category();
    }
    FAIL("no error thrown");
    return ErrorCategory::usage;
}

// Plain loops, no Eigen products.
std::vector<std::vector<double>> hand_forward(const LayeredNet& net, const std::vector<double>& x) {
    std::vector<std::vector<double>> layers;
    std::vector<double> a = x;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const auto& w = net.weights[l];
        std::vector<double> next(static_cast<std::size_t>(w.cols()), 0.0);
        for (std::size_t k = 0; k < next.size(); ++k) {
            double s = net.biases[l](static_cast<Eigen::Index>(k));
            for (std::size_t j = 0; j < a.size(); ++j)
                s += a[j] * w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            next[k] = l + 1 < net.weights.size() ? std::max(0.0, s) : s;
        }
        layers.push_back(next);
        a = next;
    }
    return layers;
}

LabeledDataset blobs(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.3);
    LabeledDataset d(2, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t y = i % 2;
        const double cx = y ? 1.5 : -1.5;
        const std::vector<double> x{cx + noise(rng), -cx + noise(rng)};
        d.add(x, y);
    }
    return d;
}

}  // namespace

TEST_SUITE("netcore") {

TEST_CASE("validate names the offending field") {
    auto net = make_net(2, {2, 2}, 1);
    validate(net);

    auto bad_shape = net;
    bad_shape.weights[0] = Eigen::MatrixXd::Zero(3, 2);
    try {
        validate(bad_shape);
        FAIL("expected a shape error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::shape);
        CHECK(std::string(e.what()).find("weights[0]") != std::string::npos);
    }

    auto nan = net;
    nan.weights[1](0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK(category_of([&] { validate(nan); }) == ErrorCategory::non_finite);

    CHECK(category_of([&] { validate(make_net(2, {3}, 1)); }) == ErrorCategory::structural);
}

TEST_CASE("forward pass on an all-ones 2-[2,2]-1 network") {
    auto net = make_net(2, {2, 2}, 1);
    for (auto& w : net.weights)
        w.setOnes();
    const std::vector<double> x{1.0, 1.0};
    const auto pass = forward_with_activations(net, x);
    REQUIRE(pass.hidden.size() == 2);
    CHECK(pass.hidden[0](0) == 2.0);
    CHECK(pass.hidden[0](1) == 2.0);
    CHECK(pass.hidden[1](0) == 4.0);
    CHECK(pass.hidden[1](1) == 4.0);
    CHECK(pass.logits(0) == 8.0);

    const std::vector<double> zero{0.0, 0.0};
    const auto z = forward_with_activations(net, zero);
    CHECK(z.hidden[0].isZero());
    CHECK(z.hidden[1].isZero());

    const std::vector<double> wrong{1.0};
    CHECK(category_of([&] { forward_with_activations(net, wrong); }) == ErrorCategory::shape);
}

TEST_CASE("forward pass matches hand-written loops on small random nets") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> width(1, 3);
        std::vector<std::size_t> widths(2 + seed % 2);
        for (auto& w : widths)
            w = width(rng);
        auto net = testing::random_dense_net(rng, width(rng), widths, width(rng));
        std::normal_distribution<double> g(0.0, 1.0);
        for (auto& b : net.biases)
            for (Eigen::Index k = 0; k < b.size(); ++k)
                b(k) = g(rng);
        std::vector<double> x(net.input_dim);
        for (auto& v : x)
            v = g(rng);
        const auto pass = forward_with_activations(net, x);
        const auto ref = hand_forward(net, x);
        for (std::size_t l = 0; l < widths.size(); ++l)
            for (std::size_t k = 0; k < widths[l]; ++k) {
                CHECK(pass.hidden[l](static_cast<Eigen::Index>(k)) == doctest::Approx(ref[l][k]).epsilon(1e-9));
                CHECK(pass.hidden[l](static_cast<Eigen::Index>(k)) >= 0.0);
            }
        for (std::size_t k = 0; k < net.output_dim; ++k)
            CHECK(std::abs(pass.logits(static_cast<Eigen::Index>(k)) - ref.back()[k]) < 1e-9);
    }
}

TEST_CASE("influence multiplies activation by outgoing weight mass") {
    auto net = make_net(1, {1, 2}, 1);
    net.weights[1] << 0.2, -0.4;
    net.weights[2] << 1.0, 1.0;
    std::vector<Eigen::VectorXd> hidden{Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Zero(2)};
    auto infl = influence(net, hidden);
    REQUIRE(infl.values.size() == 3);
    CHECK(infl.values[0] == doctest::Approx(0.3));
    CHECK(infl.values[1] == 0.0);

    hidden[0](0) = 0.0;
    CHECK(influence(net, hidden).values[0] == 0.0);

    net.weights[0] << 3.0;
    hidden[0](0) = -2.0;
    CHECK(influence(net, hidden, InfluenceMode::incoming).values[0] == doctest::Approx(6.0));

    net.weights[1].setZero();
    hidden[0](0) = 5.0;
    CHECK(influence(net, hidden).values[0] == 0.0);
}

TEST_CASE("top-r per layer with ties to the lower index") {
    const Layout layout({3, 2});
    InfluenceVector infl{{0.9, 0.1, 0.5, 0.5, 0.5}};
    const auto t = top_r_threshold(infl, layout, 2);
    CHECK(layout.describe(t) == "{0:0,0:2,1:0,1:1}");
    const auto t1 = top_r_threshold(infl, layout, 1);
    CHECK(layout.describe(t1) == "{0:0,1:0}");
    CHECK(category_of([&] { top_r_threshold(infl, layout, 3); }) == ErrorCategory::usage);
    CHECK(category_of([&] { top_r_threshold(infl, layout, 0); }) == ErrorCategory::usage);

    const Layout square({2, 2});
    InfluenceVector flat{{1, 2, 3, 4}};
    CHECK(top_r_threshold(flat, square, 2).count() == 4);
}

TEST_CASE("training separates blobs and is seed-deterministic") {
    const auto data = blobs(3, 200);
    TrainOptions opt;
    opt.hidden_widths = {4, 3};
    opt.epochs = 50;
    const auto net = train_mlp(data, opt);
    CHECK(accuracy(net, data) >= 0.95);

    const auto again = train_mlp(data, opt);
    CHECK(net_to_json(net) == net_to_json(again));

    opt.epochs = 0;
    const auto untouched = train_mlp(data, opt);
    CHECK(net_to_json(untouched) == net_to_json(init_mlp(2, {4, 3}, 2, opt.seed)));

    opt.learning_rate = 1e300;
    opt.epochs = 5;
    CHECK(category_of([&] { train_mlp(data, opt); }) == ErrorCategory::divergence);
}

}
