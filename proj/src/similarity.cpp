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

#include "fam/similarity.hpp"

#include <algorithm>
#include <cmath>

namespace fam {
namespace {

void check_lengths(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "embedding lengths " + std::to_string(a.size()) +
                                               " and " + std::to_string(b.size()));
  }
}

void check_supports(const Embedding& query, std::span<const Embedding> supports) {
  if (supports.empty()) throw Error(ErrorCode::EmptySupportSet, "no support embeddings");
  for (const auto& s : supports) check_lengths(query, s);
}

double l2_norm(const Embedding& z) {
  double sq = 0.0;
  for (double v : z.values()) sq += v * v;
  return std::sqrt(sq);
}

double nonzero_norm(const Embedding& z) {
  const double norm = l2_norm(z);
  if (norm == 0.0) throw Error(ErrorCode::ZeroNorm, "embedding has zero L2 norm");
  return norm;
}

double dot(const Embedding& a, const Embedding& b) {
  double acc = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) acc += a[n] * b[n];
  return acc;
}

}  // namespace

MetricKind parse_metric_kind(const std::string& name) {
  if (name == "cosine") return MetricKind::Cosine;
  if (name == "neg_sq_euclidean") return MetricKind::NegSqEuclidean;
  throw Error(ErrorCode::BadManifest, "unknown metric '" + name + "'");
}

std::string to_string(MetricKind kind) {
  return kind == MetricKind::Cosine ? "cosine" : "neg_sq_euclidean";
}

ContributionMode parse_contribution_mode(const std::string& name) {
  if (name == "sign_normalized") return ContributionMode::SignNormalized;
  if (name == "unnormalized") return ContributionMode::Unnormalized;
  throw Error(ErrorCode::BadManifest, "unknown contribution_mode '" + name + "'");
}

std::string to_string(ContributionMode mode) {
  return mode == ContributionMode::SignNormalized ? "sign_normalized" : "unnormalized";
}

SimilarityScore cosine(const Embedding& a, const Embedding& b) {
  check_lengths(a, b);
  const double na = nonzero_norm(a);
  const double nb = nonzero_norm(b);
  return {std::clamp(dot(a, b) / (na * nb), -1.0, 1.0)};
}

SimilarityScore neg_sq_euclidean(const Embedding& a, const Embedding& b) {
  check_lengths(a, b);
  double acc = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double d = a[n] - b[n];
    acc += d * d;
  }
  return {-acc};
}

SimilarityScore similarity(const Embedding& a, const Embedding& b, const MetricSpec& metric) {
  return metric.kind == MetricKind::Cosine ? cosine(a, b) : neg_sq_euclidean(a, b);
}

SimilarityScore mean_similarity(const Embedding& query, std::span<const Embedding> supports,
                                const MetricSpec& metric) {
  check_supports(query, supports);
  double acc = 0.0;
  for (const auto& support : supports) acc += similarity(query, support, metric).value;
  return {acc / static_cast<double>(supports.size())};
}

ContributionWeights cosine_contributions(const Embedding& query,
                                         std::span<const Embedding> supports,
                                         ContributionMode mode) {
  check_supports(query, supports);
  const double query_norm = nonzero_norm(query);
  std::vector<double> c(query.size(), 0.0);

  for (std::size_t k = 0; k < supports.size(); ++k) {
    const Embedding& support = supports[k];
    const double support_norm = nonzero_norm(support);
    double denom = query_norm * support_norm;
    if (mode == ContributionMode::SignNormalized) {
      const double s = dot(query, support) / denom;
      if (s == 0.0) {
        throw Error(ErrorCode::ZeroSimilarity,
                    "support " + std::to_string(k) + " is orthogonal to the query");
      }
      denom *= std::abs(s);
    }
    for (std::size_t n = 0; n < c.size(); ++n) c[n] += query[n] * support[n] / denom;
  }

  const auto K = static_cast<double>(supports.size());
  for (double& v : c) v /= K;
  return {std::move(c), false};
}

ContributionWeights euclidean_contributions(const Embedding& query,
                                            std::span<const Embedding> supports) {
  check_supports(query, supports);
  std::vector<double> c(query.size(), 0.0);
  for (const auto& support : supports) {
    for (std::size_t n = 0; n < c.size(); ++n) {
      const double d = query[n] - support[n];
      c[n] -= d * d;
    }
  }
  const auto K = static_cast<double>(supports.size());
  for (double& v : c) v /= K;
  return {std::move(c), false};
}

ContributionWeights contributions(const Embedding& query, std::span<const Embedding> supports,
                                  const MetricSpec& metric, ContributionMode mode) {
  if (metric.kind == MetricKind::Cosine) return cosine_contributions(query, supports, mode);
  return euclidean_contributions(query, supports);
}

}  // namespace fam
