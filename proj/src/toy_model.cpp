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

#include "fam/toy_model.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "fam/kernels.hpp"
#include "fam/npy.hpp"

namespace fam {
namespace {

using nlohmann::json;

void check_rank3(const Tensor& input, const char* what) {
  if (input.rank() != 3) {
    throw Error(ErrorCode::BadRank, std::string(what) + " expects a C x H x W tensor");
  }
}

std::size_t get_size(const json& node, const char* key, std::size_t fallback) {
  if (!node.contains(key)) return fallback;
  const auto& v = node.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorCode::BadManifest, std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

// Index one past the last layer that contributes to the output activation.
std::size_t output_cut(const ModelSpec& spec) {
  std::size_t cut = 0;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    if (std::holds_alternative<ConvLayer>(spec.layers[i])) {
      cut = i + 1;
      if (cut < spec.layers.size() && std::holds_alternative<LeakyReluLayer>(spec.layers[cut])) {
        ++cut;
      }
    }
  }
  return cut == 0 ? spec.layers.size() : cut;
}

}  // namespace

ConvLayer seeded_conv(std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
                      std::size_t stride, std::size_t padding, SeededLcg& rng) {
  ConvLayer layer{in_channels, out_channels, kernel, stride, padding, {}, {}};
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_channels * kernel * kernel));
  layer.weights.resize(out_channels * in_channels * kernel * kernel);
  for (double& w : layer.weights) w = rng.uniform(-bound, bound);
  layer.bias.resize(out_channels);
  for (double& b : layer.bias) b = rng.uniform(-bound, bound);
  return layer;
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadManifest, path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  SeededLcg rng(doc.value("seed", std::uint64_t{0}));

  if (!doc.contains("layers") || !doc["layers"].is_array()) {
    throw Error(ErrorCode::BadManifest, path.string() + ": missing 'layers' array");
  }
  ModelSpec spec;
  for (const auto& node : doc["layers"]) {
    const std::string type = node.value("type", "");
    if (type == "conv") {
      const std::size_t in_c = get_size(node, "in_channels", 0);
      const std::size_t out_c = get_size(node, "out_channels", 0);
      const std::size_t k = get_size(node, "kernel", 1);
      const std::size_t stride = get_size(node, "stride", 1);
      const std::size_t pad = get_size(node, "padding", 0);
      if (in_c == 0 || out_c == 0 || k == 0 || stride == 0) {
        throw Error(ErrorCode::BadManifest, "conv layer needs positive channels, kernel and stride");
      }
      ConvLayer layer;
      if (node.contains("weights")) {
        const Tensor w = read_tensor(base / node["weights"].get<std::string>());
        if (w.element_count() != out_c * in_c * k * k) {
          throw Error(ErrorCode::DimMismatch, "conv weights do not match declared geometry");
        }
        layer = ConvLayer{in_c, out_c, k, stride, pad, w.values, {}};
        if (node.contains("bias")) {
          const Tensor b = read_tensor(base / node["bias"].get<std::string>());
          if (b.element_count() != out_c) {
            throw Error(ErrorCode::DimMismatch, "conv bias does not match out_channels");
          }
          layer.bias = b.values;
        }
      } else {
        layer = seeded_conv(in_c, out_c, k, stride, pad, rng);
      }
      spec.layers.emplace_back(std::move(layer));
    } else if (type == "leaky_relu") {
      spec.layers.emplace_back(LeakyReluLayer{node.value("slope", 0.1)});
    } else if (type == "relu") {
      spec.layers.emplace_back(LeakyReluLayer{0.0});
    } else if (type == "maxpool") {
      const std::size_t k = get_size(node, "kernel", 2);
      spec.layers.emplace_back(MaxPoolLayer{k, get_size(node, "stride", k)});
    } else {
      throw Error(ErrorCode::BadManifest, "unknown layer type '" + type + "'");
    }
  }
  validate_model(spec);
  return spec;
}

void validate_model(const ModelSpec& spec) {
  std::size_t channels = 0;
  for (const auto& layer : spec.layers) {
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
      if (channels != 0 && conv->in_channels != channels) {
        throw Error(ErrorCode::DimMismatch, "conv expects " + std::to_string(conv->in_channels) +
                                                " channels, previous layer yields " +
                                                std::to_string(channels));
      }
      if (conv->weights.size() !=
          conv->out_channels * conv->in_channels * conv->kernel * conv->kernel) {
        throw Error(ErrorCode::DimMismatch, "conv weight count does not match geometry");
      }
      if (!conv->bias.empty() && conv->bias.size() != conv->out_channels) {
        throw Error(ErrorCode::DimMismatch, "conv bias count does not match out_channels");
      }
      if (!all_finite(conv->weights) || !all_finite(conv->bias)) {
        throw Error(ErrorCode::NonFinite, "conv parameters contain NaN or Inf");
      }
      channels = conv->out_channels;
    } else if (const auto* pool = std::get_if<MaxPoolLayer>(&layer)) {
      if (pool->kernel == 0 || pool->stride == 0) {
        throw Error(ErrorCode::InvalidArgument, "maxpool kernel and stride must be positive");
      }
    }
  }
}

Tensor conv2d(const Tensor& input, const ConvLayer& layer) {
  check_rank3(input, "conv2d");
  if (input.shape[0] != layer.in_channels) {
    throw Error(ErrorCode::DimMismatch, "conv2d input has " + std::to_string(input.shape[0]) +
                                            " channels, layer expects " +
                                            std::to_string(layer.in_channels));
  }
  if (layer.stride == 0) throw Error(ErrorCode::InvalidArgument, "conv2d stride must be positive");
  const ConvGeometry g{layer.in_channels, input.shape[1], input.shape[2], layer.out_channels,
                       layer.kernel,      layer.stride,   layer.padding};
  if (layer.kernel > g.in_height + 2 * g.padding || layer.kernel > g.in_width + 2 * g.padding) {
    throw Error(ErrorCode::KernelLargerThanPaddedInput,
                std::to_string(layer.kernel) + "x" + std::to_string(layer.kernel) + " kernel on " +
                    std::to_string(g.in_height) + "x" + std::to_string(g.in_width) +
                    " input with padding " + std::to_string(g.padding));
  }
  return Tensor{{g.out_channels, g.out_height(), g.out_width()},
                kernels::conv2d(input.values, layer.weights, layer.bias, g),
                DType::F64};
}

Tensor leaky_relu(const Tensor& input, double slope) {
  Tensor out = input;
  kernels::leaky_relu_inplace(out.values, slope);
  return out;
}

Tensor maxpool2d(const Tensor& input, std::size_t kernel, std::size_t stride) {
  check_rank3(input, "maxpool2d");
  if (kernel == 0 || stride == 0) {
    throw Error(ErrorCode::InvalidArgument, "maxpool kernel and stride must be positive");
  }
  if (input.shape[1] < kernel || input.shape[2] < kernel) {
    throw Error(ErrorCode::WindowTooLarge, std::to_string(kernel) + "x" + std::to_string(kernel) +
                                               " window on " + std::to_string(input.shape[1]) +
                                               "x" + std::to_string(input.shape[2]) + " input");
  }
  const PoolGeometry g{input.shape[0], input.shape[1], input.shape[2], kernel, stride};
  return Tensor{{g.channels, g.out_height(), g.out_width()}, kernels::max_pool2d(input.values, g),
                DType::F64};
}

FeatureMap forward(const ModelSpec& spec, const Tensor& image) {
  check_rank3(image, "forward");
  Tensor x = image;
  x.dtype = DType::F64;
  const std::size_t cut = output_cut(spec);
  for (std::size_t i = 0; i < cut; ++i) {
    const Layer& layer = spec.layers[i];
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
      x = conv2d(x, *conv);
    } else if (const auto* act = std::get_if<LeakyReluLayer>(&layer)) {
      x = leaky_relu(x, act->slope);
    } else {
      const auto& mp = std::get<MaxPoolLayer>(layer);
      x = maxpool2d(x, mp.kernel, mp.stride);
    }
  }
  return validate_feature_map(x);
}

}  // namespace fam
