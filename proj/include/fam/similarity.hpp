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

#include <span>
#include <string>
#include <vector>

#include "fam/types.hpp"

namespace fam {

enum class MetricKind { Cosine, NegSqEuclidean };

struct MetricSpec {
  MetricKind kind = MetricKind::Cosine;
};

MetricKind parse_metric_kind(const std::string& name);
std::string to_string(MetricKind kind);

/// How per-pair cosine contributions are scaled before averaging over supports.
enum class ContributionMode {
  /// Each pair's channel terms are divided by |s_k| as well as the norms, so a
  /// pair contributes +1 or -1 in total. This is the default.
  SignNormalized,
  /// Terms are divided by the norms only; the weights then sum to S.
  Unnormalized,
};

ContributionMode parse_contribution_mode(const std::string& name);
std::string to_string(ContributionMode mode);

struct SimilarityScore {
  double value = 0.0;
};

/// sum_n a_n b_n / (|a| |b|), clamped to [-1, 1].
/// Throws LengthMismatch or ZeroNorm.
SimilarityScore cosine(const Embedding& a, const Embedding& b);

/// -sum_n (a_n - b_n)^2. Larger is more similar.
SimilarityScore neg_sq_euclidean(const Embedding& a, const Embedding& b);

SimilarityScore similarity(const Embedding& a, const Embedding& b, const MetricSpec& metric);

/// Decision score: the metric averaged over the K supports of one class.
SimilarityScore mean_similarity(const Embedding& query, std::span<const Embedding> supports,
                                const MetricSpec& metric);

/// Channel-wise decomposition of the mean cosine score.
///
///   c_n = (1/K) sum_k z_n z_n^k / (|s_k| |Z| |Z_k|)        (default mode)
///
/// Each support's terms sum to sign(s_k), so the weights sum to the mean
/// similarity sign (1 when all supports agree). Nothing bounds individual
/// c_n to (-1, 1) when |s_k| is small.
///
/// Throws EmptySupportSet, LengthMismatch, ZeroNorm, or ZeroSimilarity when a
/// support is exactly orthogonal to the query.
ContributionWeights cosine_contributions(const Embedding& query,
                                         std::span<const Embedding> supports,
                                         ContributionMode mode = ContributionMode::SignNormalized);

/// c_n = -(1/K) sum_k (z_n - z_n^k)^2, an exact additive split of the mean
/// negative squared distance.
ContributionWeights euclidean_contributions(const Embedding& query,
                                            std::span<const Embedding> supports);

/// Dispatches on the metric. `mode` is ignored for the Euclidean metric.
ContributionWeights contributions(const Embedding& query, std::span<const Embedding> supports,
                                  const MetricSpec& metric, ContributionMode mode);

}  // namespace fam
