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

#include "bbm/netcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "bbm/error.hpp"

namespace bbm {

namespace {

std::string shape_str(Eigen::Index r, Eigen::Index c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

LayeredNet make_net(std::size_t input_dim, std::vector<std::size_t> hidden_widths, std::size_t output_dim) {
    LayeredNet net;
    net.input_dim = input_dim;
    net.hidden_widths = std::move(hidden_widths);
    net.output_dim = output_dim;
    std::size_t prev = input_dim;
    for (std::size_t l = 0; l <= net.hidden_widths.size(); ++l) {
        const std::size_t next = l < net.hidden_widths.size() ? net.hidden_widths[l] : output_dim;
        net.weights.push_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(prev), static_cast<Eigen::Index>(next)));
        net.biases.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(next)));
        prev = next;
    }
    return net;
}

void validate(const LayeredNet& net) {
    if (net.hidden_widths.size() < 2)
        throw Error(ErrorCategory::structural, "hidden_widths: need at least 2 hidden layers, got " +
                                                   std::to_string(net.hidden_widths.size()));
    if (net.input_dim == 0 || net.output_dim == 0)
        throw Error(ErrorCategory::shape, "input_dim and output_dim must be positive");
    for (std::size_t l = 0; l < net.hidden_widths.size(); ++l)
        if (net.hidden_widths[l] == 0)
            throw Error(ErrorCategory::shape, "hidden_widths[" + std::to_string(l) + "]: width must be positive");
    const std::size_t layers = net.hidden_widths.size() + 1;
    if (net.weights.size() != layers)
        throw Error(ErrorCategory::shape, "weights: expected " + std::to_string(layers) + " matrices, got " +
                                              std::to_string(net.weights.size()));
    if (net.biases.size() != layers)
        throw Error(ErrorCategory::shape, "biases: expected " + std::to_string(layers) + " vectors, got " +
                                              std::to_string(net.biases.size()));
    std::size_t prev = net.input_dim;
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t next = l + 1 < layers ? net.hidden_widths[l] : net.output_dim;
        const auto& w = net.weights[l];
        const std::string where = "weights[" + std::to_string(l) + "]";
        if (static_cast<std::size_t>(w.rows()) != prev || static_cast<std::size_t>(w.cols()) != next)
            throw Error(ErrorCategory::shape, where + ": expected " + shape_str(static_cast<Eigen::Index>(prev),
                                                                                static_cast<Eigen::Index>(next)) +
                                                  ", got " + shape_str(w.rows(), w.cols()));
        for (Eigen::Index j = 0; j < w.rows(); ++j)
            for (Eigen::Index k = 0; k < w.cols(); ++k)
                if (!std::isfinite(w(j, k)))
                    throw Error(ErrorCategory::non_finite,
                                where + "[" + std::to_string(j) + "][" + std::to_string(k) + "]: non-finite value");
        const auto& b = net.biases[l];
        if (static_cast<std::size_t>(b.size()) != next)
            throw Error(ErrorCategory::shape, "biases[" + std::to_string(l) + "]: expected length " +
                                                  std::to_string(next) + ", got " + std::to_string(b.size()));
        for (Eigen::Index k = 0; k < b.size(); ++k)
            if (!std::isfinite(b(k)))
                throw Error(ErrorCategory::non_finite,
                            "biases[" + std::to_string(l) + "][" + std::to_string(k) + "]: non-finite value");
        prev = next;
    }
}

std::size_t ForwardPass::predicted() const {
    Eigen::Index best = 0;
    logits.maxCoeff(&best);
    return static_cast<std::size_t>(best);
}

ForwardPass forward_with_activations(const LayeredNet& net, std::span<const double> x) {
    if (x.size() != net.input_dim)
        throw Error(ErrorCategory::shape, "input has dimension " + std::to_string(x.size()) + ", network expects " +
                                              std::to_string(net.input_dim));
    ForwardPass out;
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    for (std::size_t l = 0; l < net.hidden_widths.size(); ++l) {
        a = (net.weights[l].transpose() * a + net.biases[l]).cwiseMax(0.0);
        out.hidden.push_back(a);
    }
    out.logits = net.weights.back().transpose() * a + net.biases.back();
    return out;
}

InfluenceVector influence(const LayeredNet& net, const std::vector<Eigen::VectorXd>& hidden, InfluenceMode mode) {
    if (hidden.size() != net.hidden_widths.size())
        throw Error(ErrorCategory::shape, "activation capture has " + std::to_string(hidden.size()) +
                                              " layers, network has " + std::to_string(net.hidden_widths.size()));
    InfluenceVector out;
    for (std::size_t l = 0; l < hidden.size(); ++l) {
        if (static_cast<std::size_t>(hidden[l].size()) != net.hidden_widths[l])
            throw Error(ErrorCategory::shape, "activation capture layer " + std::to_string(l) + " has the wrong width");
        const Eigen::VectorXd mass = mode == InfluenceMode::outgoing
                                         ? Eigen::VectorXd(net.weights[l + 1].cwiseAbs().rowwise().sum())
                                         : Eigen::VectorXd(net.weights[l].cwiseAbs().colwise().sum().transpose());
        for (Eigen::Index j = 0; j < hidden[l].size(); ++j)
            out.values.push_back(std::abs(hidden[l](j)) * mass(j));
    }
    return out;
}

NeuronSet top_r_threshold(const InfluenceVector& infl, const Layout& layout, std::size_t r) {
    if (infl.values.size() != layout.size())
        throw Error(ErrorCategory::shape, "influence vector length does not match the layout");
    if (r == 0)
        throw Error(ErrorCategory::usage, "r must be at least 1");
    NeuronSet selected = layout.empty_set();
    std::vector<std::size_t> order;
    for (std::size_t l = 0; l < layout.layers(); ++l) {
        if (r > layout.width(l))
            throw Error(ErrorCategory::usage, "r = " + std::to_string(r) + " exceeds the width of hidden layer " +
                                                  std::to_string(l));
        order.resize(layout.width(l));
        std::iota(order.begin(), order.end(), layout.offset(l));
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(r), order.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (infl.values[a] != infl.values[b])
                                  return infl.values[a] > infl.values[b];
                              return a < b;
                          });
        for (std::size_t i = 0; i < r; ++i)
            selected.set(order[i]);
    }
    return selected;
}

LayeredNet init_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden_widths, std::size_t output_dim,
                    std::uint64_t seed) {
    LayeredNet net = make_net(input_dim, hidden_widths, output_dim);
    std::mt19937_64 rng(seed);
    for (auto& w : net.weights) {
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(w.rows())));
        for (Eigen::Index j = 0; j < w.rows(); ++j)
            for (Eigen::Index k = 0; k < w.cols(); ++k)
                w(j, k) = dist(rng);
    }
    return net;
}

LayeredNet train_mlp(const LabeledDataset& data, const TrainOptions& options) {
    if (data.empty())
        throw Error(ErrorCategory::usage, "cannot train on an empty dataset");
    if (options.hidden_widths.size() < 2)
        throw Error(ErrorCategory::structural, "need at least 2 hidden layers");
    if (options.batch_size == 0)
        throw Error(ErrorCategory::usage, "batch size must be positive");

    using Matrix = Eigen::MatrixXd;
    LayeredNet net = init_mlp(data.dim(), options.hidden_widths, data.num_classes(), options.seed);
    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    const std::size_t layers = net.weights.size();
    std::vector<Matrix> z(layers), a(layers + 1);
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
            const std::size_t rows = std::min(options.batch_size, order.size() - start);
            const auto b = static_cast<Eigen::Index>(rows);
            a[0].resize(b, static_cast<Eigen::Index>(data.dim()));
            for (std::size_t i = 0; i < rows; ++i) {
                const auto x = data.instance(order[start + i]);
                for (std::size_t d = 0; d < x.size(); ++d)
                    a[0](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = x[d];
            }
            for (std::size_t l = 0; l < layers; ++l) {
                z[l] = a[l] * net.weights[l];
                z[l].rowwise() += net.biases[l].transpose();
                a[l + 1] = l + 1 < layers ? Matrix(z[l].cwiseMax(0.0)) : z[l];
            }

            // Softmax cross-entropy; delta = (p - y) / batch.
            Matrix delta = a[layers];
            for (Eigen::Index i = 0; i < b; ++i) {
                const double m = delta.row(i).maxCoeff();
                delta.row(i) = (delta.row(i).array() - m).exp().matrix();
                const double s = delta.row(i).sum();
                delta.row(i) /= s;
                const auto y = static_cast<Eigen::Index>(data.label(order[start + static_cast<std::size_t>(i)]));
                epoch_loss -= std::log(std::max(delta(i, y), 1e-300));
                delta(i, y) -= 1.0;
            }
            delta /= static_cast<double>(rows);

            for (std::size_t l = layers; l-- > 0;) {
                const Matrix grad_w = a[l].transpose() * delta;
                const Eigen::VectorXd grad_b = delta.colwise().sum().transpose();
                if (l > 0)
                    delta = ((delta * net.weights[l].transpose()).array() * (z[l - 1].array() > 0.0).cast<double>())
                                .matrix();
                net.weights[l] -= options.learning_rate * grad_w;
                net.biases[l] -= options.learning_rate * grad_b;
            }
        }
        if (!std::isfinite(epoch_loss))
            throw Error(ErrorCategory::divergence, "training loss became non-finite in epoch " + std::to_string(epoch) +
                                                       "; lower the learning rate");
    }
    return net;
}

double accuracy(const LayeredNet& net, const LabeledDataset& data) {
    if (data.empty())
        return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        hits += forward_with_activations(net, data.instance(i)).predicted() == data.label(i);
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace bbm
