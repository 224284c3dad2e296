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

#include <optional>
#include <span>
#include <vector>

#include "fam/pooling.hpp"
#include "fam/similarity.hpp"
#include "fam/transform.hpp"
#include "fam/types.hpp"

namespace fam {

/// Max-min normalization of contribution weights into [0, 1]. A constant
/// vector has no informative channel and maps to all zeros.
ContributionWeights normalize_weights(const ContributionWeights& c);

/// True when `normalize_weights` would hit the max == min case.
bool is_degenerate(std::span<const double> values) noexcept;

/// Weighted sum of activation maps, sum_n weights[n] * A^n, with no checks on
/// the weights beyond their count. Shared by FAM and CAM.
SaliencyMap combine_activation_maps(const FeatureMap& map, std::span<const double> weights);

/// L_FAM = sum_n cbar_n A^n. Requires weights produced by `normalize_weights`
/// (NotNormalized otherwise) with one entry per channel (DimMismatch).
/// No ReLU is applied; negative regions are left for `normalize_map`.
SaliencyMap compose_fam(const FeatureMap& map, const ContributionWeights& weights);

/// Bilinear resampling with half-pixel centres:
///   x_src = (x_out + 0.5) * w / out_w - 0.5, clamped to [0, w - 1]
SaliencyMap upsample_bilinear(const SaliencyMap& map, std::size_t out_height,
                              std::size_t out_width);

/// Max-min normalization of a map into [0, 1]; constant maps become zero.
SaliencyMap normalize_map(const SaliencyMap& map);

struct FamOptions {
  PoolingSpec pooling;
  MetricSpec metric;
  ContributionMode contribution_mode = ContributionMode::SignNormalized;
  std::optional<ProjectionWeights> projection;
  /// Bias of the projection head. Rejected with BiasUnsupported unless
  /// `ignore_bias`, in which case it shifts the projected embeddings but
  /// plays no part in mapping contributions back.
  std::optional<std::vector<double>> projection_bias;
  bool ignore_bias = false;
  /// Output resolution; zero means the feature-map resolution.
  std::size_t out_height = 0;
  std::size_t out_width = 0;
};

struct FamResult {
  /// L_FAM at feature resolution, before resampling or map normalization.
  SaliencyMap raw;
  /// norm(up(L_FAM)) at the requested output resolution.
  SaliencyMap saliency;
  /// Decision score S, computed in the decision (projected) space.
  double score = 0.0;
  /// Channel-space contributions C before and after max-min normalization.
  ContributionWeights contributions;
  ContributionWeights importance;
  /// Decision-space contributions C' when a projection is present.
  std::optional<ContributionWeights> decision_contributions;
  Embedding query_embedding;
  bool degenerate_normalization = false;
  bool single_channel = false;
};

/// Pools query and supports, scores them, splits the score into channel
/// contributions (through the projection head when present), then
/// normalizes, composes, upsamples and normalizes the map.
///
/// With a single channel the weight is fixed at 1, since max-min
/// normalization of one value is degenerate.
FamResult fam_pipeline(const FeatureMap& query, std::span<const FeatureMap> supports,
                       const FamOptions& options);

/// The pipeline on already-pooled inputs, for callers that embed supports once
/// and reuse them (e.g. corpus evaluation). `supports` are channel-space
/// embeddings; they are projected here when a projection is configured.
FamResult fam_from_embeddings(const FeatureMap& query, std::span<const Embedding> supports,
                              const FamOptions& options);

/// Maps a channel-space embedding into the decision space configured in
/// `options` (identity when there is no projection).
Embedding to_decision_space(const Embedding& z, const FamOptions& options);

}  // namespace fam
