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

#include "fam/fam.hpp"

#include <algorithm>

#include "fam/kernels.hpp"

namespace fam {
namespace {

std::vector<double> min_max_scale(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::clamp((values[i] - lo) / range, 0.0, 1.0);
  }
  return out;
}

void check_bias_policy(const FamOptions& options) {
  if (options.projection_bias && !options.ignore_bias) {
    throw Error(ErrorCode::BiasUnsupported,
                "projection bias breaks contribution conservation; pass --ignore-bias to proceed");
  }
  if (options.projection_bias && !options.projection) {
    throw Error(ErrorCode::BadManifest, "projection bias given without projection weights");
  }
}

}  // namespace

ContributionWeights normalize_weights(const ContributionWeights& c) {
  if (!all_finite(c.values)) throw Error(ErrorCode::NonFinite, "contribution weights not finite");
  return {min_max_scale(c.values), true};
}

bool is_degenerate(std::span<const double> values) noexcept {
  if (values.empty()) return true;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *lo == *hi;
}

SaliencyMap combine_activation_maps(const FeatureMap& map, std::span<const double> weights) {
  if (weights.size() != map.channels()) {
    throw Error(ErrorCode::DimMismatch, std::to_string(weights.size()) + " weights for " +
                                            std::to_string(map.channels()) + " channels");
  }
  return SaliencyMap(map.height(), map.width(),
                     kernels::weighted_plane_sum(map.values(), map.plane_size(), weights));
}

SaliencyMap compose_fam(const FeatureMap& map, const ContributionWeights& weights) {
  if (!weights.normalized) {
    throw Error(ErrorCode::NotNormalized, "compose_fam expects max-min normalized weights");
  }
  return combine_activation_maps(map, weights.values);
}

SaliencyMap upsample_bilinear(const SaliencyMap& map, std::size_t out_height,
                              std::size_t out_width) {
  if (out_height == 0 || out_width == 0) {
    throw Error(ErrorCode::InvalidArgument, "upsampling target must be at least 1x1");
  }
  if (out_height == map.height() && out_width == map.width()) return map;
  return SaliencyMap(out_height, out_width,
                     kernels::resize_bilinear(map.values(), map.height(), map.width(),
                                              out_height, out_width));
}

SaliencyMap normalize_map(const SaliencyMap& map) {
  return SaliencyMap(map.height(), map.width(), min_max_scale(map.values()));
}

Embedding to_decision_space(const Embedding& z, const FamOptions& options) {
  if (!options.projection) return z;
  return project_embedding(z, *options.projection,
                           options.ignore_bias ? options.projection_bias : std::nullopt);
}

FamResult fam_from_embeddings(const FeatureMap& query, std::span<const Embedding> supports,
                              const FamOptions& options) {
  check_bias_policy(options);
  if (supports.empty()) throw Error(ErrorCode::EmptySupportSet, "no support feature maps");
  if (options.projection && options.projection->rows() != query.channels()) {
    throw Error(ErrorCode::DimMismatch, "projection has " +
                                            std::to_string(options.projection->rows()) +
                                            " rows but the feature map has " +
                                            std::to_string(query.channels()) + " channels");
  }
  for (const auto& s : supports) {
    if (s.size() != query.channels()) {
      throw Error(ErrorCode::DimMismatch, "support embedding length does not match query channels");
    }
  }

  Embedding z = pool(query, options.pooling);
  Embedding decision_query = to_decision_space(z, options);
  std::vector<Embedding> decision_supports;
  decision_supports.reserve(supports.size());
  for (const auto& s : supports) decision_supports.push_back(to_decision_space(s, options));

  const double score = mean_similarity(decision_query, decision_supports, options.metric).value;
  ContributionWeights decision_c =
      contributions(decision_query, decision_supports, options.metric, options.contribution_mode);

  std::optional<ContributionWeights> c_prime;
  ContributionWeights c = decision_c;
  if (options.projection) {
    c_prime = decision_c;
    c = inverse_transform_contributions(decision_c, *options.projection);
  }

  const bool single = query.channels() == 1;
  const bool degenerate = !single && is_degenerate(c.values);
  ContributionWeights importance =
      single ? ContributionWeights{{1.0}, true} : normalize_weights(c);

  SaliencyMap raw = compose_fam(query, importance);
  const std::size_t oh = options.out_height ? options.out_height : query.height();
  const std::size_t ow = options.out_width ? options.out_width : query.width();
  SaliencyMap saliency = normalize_map(upsample_bilinear(raw, oh, ow));

  return FamResult{std::move(raw),       std::move(saliency),   score,
                   std::move(c),         std::move(importance), std::move(c_prime),
                   std::move(z),         degenerate,            single};
}

FamResult fam_pipeline(const FeatureMap& query, std::span<const FeatureMap> supports,
                       const FamOptions& options) {
  std::vector<Embedding> pooled;
  pooled.reserve(supports.size());
  for (const auto& s : supports) {
    if (s.channels() != query.channels()) {
      throw Error(ErrorCode::DimMismatch, "support feature map has " +
                                              std::to_string(s.channels()) + " channels, query has " +
                                              std::to_string(query.channels()));
    }
    pooled.push_back(pool(s, options.pooling));
  }
  return fam_from_embeddings(query, pooled, options);
}

}  // namespace fam
