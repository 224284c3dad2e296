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

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <variant>
#include <vector>

#include "fam/types.hpp"

namespace fam {

/// Knuth's MMIX linear congruential generator. Its output sequence is fixed by
/// the standard, which keeps seeded test models identical across platforms.
class SeededLcg {
 public:
  explicit SeededLcg(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) from the top 53 bits of the next state.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                  1442695040888963407ULL, 0ULL>
      engine_;
};

struct ConvLayer {
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t kernel = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::vector<double> weights;  // [out][in][k][k]
  std::vector<double> bias;     // [out], may be empty
};

struct LeakyReluLayer {
  double slope = 0.1;
};

struct MaxPoolLayer {
  std::size_t kernel = 2;
  std::size_t stride = 2;
};

using Layer = std::variant<ConvLayer, LeakyReluLayer, MaxPoolLayer>;

struct ModelSpec {
  std::vector<Layer> layers;
};

/// Conv weights and bias drawn uniformly from +-1/sqrt(in * k * k).
ConvLayer seeded_conv(std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
                      std::size_t stride, std::size_t padding, SeededLcg& rng);

/// Loads a model description:
///   {"seed": 7, "layers": [
///     {"type": "conv", "in_channels": 3, "out_channels": 8, "kernel": 3,
///      "stride": 1, "padding": 1, "weights": "w.npy", "bias": "b.npy"},
///     {"type": "leaky_relu", "slope": 0.1},
///     {"type": "maxpool", "kernel": 2, "stride": 2}]}
/// Paths resolve against the file's directory. Conv layers without "weights"
/// are filled from SeededLcg(seed), drawn layer by layer in order.
ModelSpec load_model_spec(const std::filesystem::path& path);

/// Checks channel compatibility and finiteness; throws DimMismatch or NonFinite.
void validate_model(const ModelSpec& spec);

Tensor conv2d(const Tensor& input, const ConvLayer& layer);
Tensor leaky_relu(const Tensor& input, double slope);
Tensor maxpool2d(const Tensor& input, std::size_t kernel, std::size_t stride);

/// Runs the layers in order and returns the activation of the last
/// convolution (including a LeakyReLU directly after it). Layers past that
/// point are not applied. An empty model returns the image itself.
FeatureMap forward(const ModelSpec& spec, const Tensor& image);

}  // namespace fam
