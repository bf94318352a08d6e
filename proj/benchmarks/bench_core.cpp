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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "bbm/backbone.hpp"
#include "bbm/miner.hpp"
#include "bbm/netcore.hpp"
#include "bbm/transact.hpp"

using namespace bbm;

namespace {

LayeredNet dense_net(std::size_t input, std::vector<std::size_t> widths, std::size_t output, std::uint64_t seed) {
    return init_mlp(input, widths, output, seed);
}

// A few planted groups per row plus scattered noise, like top-r tables.
TransactionTable planted(const Layout& layout, std::size_t rows, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<NeuronId>> plants(4);
    for (auto& p : plants)
        for (std::size_t l = 0; l < layout.layers(); ++l)
            for (int k = 0; k < 2; ++k)
                p.push_back({l, rng() % layout.width(l)});
    std::vector<std::vector<NeuronId>> out;
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = plants[rng() % plants.size()];
        for (std::size_t l = 0; l < layout.layers(); ++l)
            for (int k = 0; k < 2; ++k)
                row.push_back({l, rng() % layout.width(l)});
        out.push_back(row);
    }
    return synthetic_table(ConceptId::correct(0), layout, out);
}

void BM_Forward(benchmark::State& state) {
    const auto net = dense_net(784, {64, 32}, 2, 1);
    std::vector<double> x(784, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(forward_with_activations(net, x));
}
BENCHMARK(BM_Forward);

void BM_TopR(benchmark::State& state) {
    const auto net = dense_net(784, {64, 32}, 2, 1);
    std::vector<double> x(784, 0.5);
    const auto pass = forward_with_activations(net, x);
    const auto infl = influence(net, pass.hidden);
    for (auto _ : state)
        benchmark::DoNotOptimize(top_r_threshold(infl, net.layout(), 5));
}
BENCHMARK(BM_TopR);

void BM_FrequentPatterns(benchmark::State& state) {
    const Layout layout({64, 32});
    const auto t = planted(layout, static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(frequent_patterns(t, 0.1));
}
BENCHMARK(BM_FrequentPatterns)->Arg(200)->Arg(800);

void BM_MaxMinsup(benchmark::State& state) {
    const Layout layout({64, 32});
    const auto net = dense_net(16, {64, 32}, 2, 3);
    const Connectivity conn(net);
    const auto t = planted(layout, static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(find_max_minsup(t, conn));
}
BENCHMARK(BM_MaxMinsup)->Arg(200)->Arg(800);

void BM_FscoreThreshold(benchmark::State& state) {
    const Layout layout({64, 32});
    const auto net = dense_net(16, {64, 32}, 2, 3);
    const Connectivity conn(net);
    const auto t = planted(layout, static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(fscore_threshold(t, conn));
}
BENCHMARK(BM_FscoreThreshold)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
