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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "bbm/dataset.hpp"
#include "bbm/neuron.hpp"

namespace bbm {

enum class Activation { relu };

/// Which weights enter a neuron's influence score. Outgoing measures the
/// effect on downstream layers; incoming is kept as an alternative reading.
enum class InfluenceMode { outgoing, incoming };

/// Fully connected feed-forward network with rectifier hidden layers.
///
/// weights[l](j, k) connects node j of hidden layer l-1 (the input when
/// l == 0) to node k of hidden layer l. The final matrix feeds the output
/// layer, so weights.size() == hidden_widths.size() + 1, likewise biases.
struct LayeredNet {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden_widths;
    std::size_t output_dim = 0;
    Activation activation = Activation::relu;
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    std::size_t hidden_layers() const noexcept { return hidden_widths.size(); }
    Layout layout() const { return Layout(hidden_widths); }
};

/// Zero-initialised network of the given shape.
LayeredNet make_net(std::size_t input_dim, std::vector<std::size_t> hidden_widths, std::size_t output_dim);

/// Throws Error(shape | non_finite | structural) naming the offending field.
void validate(const LayeredNet& net);

struct ForwardPass {
    Eigen::VectorXd logits;               // pre-softmax
    std::vector<Eigen::VectorXd> hidden;  // post-rectifier, one per hidden layer

    std::size_t predicted() const;
};

ForwardPass forward_with_activations(const LayeredNet& net, std::span<const double> x);

/// One non-negative score per hidden neuron, in flat Layout order.
struct InfluenceVector {
    std::vector<double> values;
};

/// |activation| times the summed absolute weights leaving (or entering) each
/// hidden neuron.
InfluenceVector influence(const LayeredNet& net, const std::vector<Eigen::VectorXd>& hidden,
                          InfluenceMode mode = InfluenceMode::outgoing);

/// The r most influential neurons of every hidden layer; ties go to the
/// lower index.
NeuronSet top_r_threshold(const InfluenceVector& infl, const Layout& layout, std::size_t r);

inline constexpr std::size_t kDefaultTopR = 5;

struct TrainOptions {
    std::vector<std::size_t> hidden_widths{64, 32};
    std::size_t epochs = 30;
    double learning_rate = 0.05;
    std::size_t batch_size = 32;
    std::uint64_t seed = 1;
};

/// He-normal weights, zero biases.
LayeredNet init_mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden_widths, std::size_t output_dim,
                    std::uint64_t seed);

/// Minibatch gradient descent on softmax cross-entropy. Bit-for-bit
/// deterministic for a given seed; throws Error(divergence) when the loss
/// stops being finite.
LayeredNet train_mlp(const LabeledDataset& data, const TrainOptions& options);

double accuracy(const LayeredNet& net, const LabeledDataset& data);

}  // namespace bbm
