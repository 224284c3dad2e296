/*
   Copyright 2026 The FAM Authors
   SPDX-License-Identifier: Apache-2.0

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

// OpenMP kernels against the serial reference on representative sizes.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fam/kernels.hpp"

namespace {

std::vector<double> random_values(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Args: channels, spatial side.
template <auto Fn>
void BM_WeightedPlaneSum(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto side = static_cast<std::size_t>(state.range(1));
  const auto planes = random_values(c * side * side, 1);
  const auto weights = random_values(c, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(planes, side * side, weights));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c * side * side));
}

template <auto Fn>
void BM_PoolLse(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto side = static_cast<std::size_t>(state.range(1));
  const auto planes = random_values(c * side * side, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(planes, side * side, 1.0));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(c * side * side));
}

// Args: source side, output side.
template <auto Fn>
void BM_ResizeBilinear(benchmark::State& state) {
  const auto in = static_cast<std::size_t>(state.range(0));
  const auto out = static_cast<std::size_t>(state.range(1));
  const auto src = random_values(in * in, 4);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(src, in, in, out, out));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(out * out));
}

// Args: in channels, out channels, spatial side; 3x3 kernel, padding 1.
template <auto Fn>
void BM_Conv2d(benchmark::State& state) {
  fam::ConvGeometry g;
  g.in_channels = static_cast<std::size_t>(state.range(0));
  g.out_channels = static_cast<std::size_t>(state.range(1));
  g.in_height = g.in_width = static_cast<std::size_t>(state.range(2));
  g.kernel = 3;
  g.padding = 1;
  const auto input = random_values(g.in_channels * g.in_height * g.in_width, 5);
  const auto weights = random_values(g.out_channels * g.in_channels * 9, 6);
  const auto bias = random_values(g.out_channels, 7);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(input, weights, bias, g));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(g.out_channels * g.out_height() * g.out_width()));
}

}  // namespace

BENCHMARK_TEMPLATE(BM_WeightedPlaneSum, fam::kernels::weighted_plane_sum)->Name("weighted_plane_sum/omp")->Args({512, 7})->Args({256, 28});
BENCHMARK_TEMPLATE(BM_WeightedPlaneSum, fam::reference::weighted_plane_sum)->Name("weighted_plane_sum/serial")->Args({512, 7})->Args({256, 28});
BENCHMARK_TEMPLATE(BM_PoolLse, fam::kernels::pool_lse)->Name("pool_lse/omp")->Args({512, 7})->Args({256, 28});
BENCHMARK_TEMPLATE(BM_PoolLse, fam::reference::pool_lse)->Name("pool_lse/serial")->Args({512, 7})->Args({256, 28});
BENCHMARK_TEMPLATE(BM_ResizeBilinear, fam::kernels::resize_bilinear)->Name("resize_bilinear/omp")->Args({7, 224})->Args({28, 448});
BENCHMARK_TEMPLATE(BM_ResizeBilinear, fam::reference::resize_bilinear)->Name("resize_bilinear/serial")->Args({7, 224})->Args({28, 448});
BENCHMARK_TEMPLATE(BM_Conv2d, fam::kernels::conv2d)->Name("conv2d/omp")->Args({3, 16, 64})->Args({16, 32, 32});
BENCHMARK_TEMPLATE(BM_Conv2d, fam::reference::conv2d)->Name("conv2d/serial")->Args({3, 16, 64})->Args({16, 32, 32});

BENCHMARK_MAIN();
