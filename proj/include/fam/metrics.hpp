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
#include <string>
#include <vector>

#include "fam/types.hpp"

namespace fam {

/// Fraction of the binarization threshold relative to the map maximum used
/// for box estimation.
inline constexpr double kDefaultThresholdFraction = 0.2;

/// Energy-based pointing game: share of total saliency mass inside `box`.
/// Expects a non-negative map at image resolution.
/// Throws BoxOutOfBounds, InvalidArgument (negative values) or ZeroEnergy.
double energy_proportion(const SaliencyMap& saliency, const BoundingBox& box);

/// Marks pixels with value >= fraction * max. Inclusive so the maximum is
/// always kept. Throws NonPositiveMax or InvalidArgument (fraction outside (0,1]).
BinaryMask binarize(const SaliencyMap& map, double fraction);

/// Keeps only the largest 8-connected component. On equal sizes the
/// component holding the smallest row-major pixel index wins.
/// Throws EmptyMask.
BinaryMask largest_component(const BinaryMask& mask);

/// Tightest half-open box around all set pixels. Throws EmptyMask.
BoundingBox estimate_bbox(const BinaryMask& mask);

/// Intersection over union by integer pixel counting.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Multiplies each channel of a C x H x W image by an H x W saliency map in
/// [0, 1]. Throws DimMismatch or InvalidArgument (values outside [0, 1]).
Tensor mask_image(const Tensor& image, const SaliencyMap& saliency);

/// (1/N) sum max(0, s_i - s'_i) / s_i * 100.
/// Throws LengthMismatch, EmptySupportSet (no scores), ZeroScore or NegativeScore.
double average_drop(std::span<const double> s, std::span<const double> s_masked);

/// Percentage of indices where the masked score is strictly higher.
double increase_confidence(std::span<const double> s, std::span<const double> s_masked);

struct LocalizationResult {
  double proportion = 0.0;
  double iou = 0.0;
  BoundingBox estimated;
};

/// Proportion and IoU for one saliency map at image resolution.
///
/// A non-constant map is max-min normalized first (idempotent for maps that
/// already are); a constant map is scored as given so a uniform explanation
/// still has an energy distribution. IoU uses binarize -> largest component
/// -> tightest box against `gt`.
LocalizationResult evaluate_localization(const SaliencyMap& saliency, const BoundingBox& gt,
                                         double fraction = kDefaultThresholdFraction);

struct EvalRecord {
  std::string id;
  std::optional<double> proportion;
  std::optional<double> iou;
  std::optional<double> s;
  std::optional<double> s_masked;
};

struct EvalFailure {
  std::string id;
  std::string error;
  std::string reason;
};

struct EvalAggregates {
  std::optional<double> mean_proportion;
  std::optional<double> mean_iou;
  std::optional<double> average_drop;
  std::optional<double> increase_in_confidence;
  std::size_t count = 0;
  std::size_t skipped_nonpositive = 0;
};

struct EvalReport {
  std::vector<EvalRecord> images;
  std::vector<EvalFailure> failures;
  EvalAggregates aggregates;
};

/// Recomputes aggregates from records. Faithfulness uses only records with
/// both scores and s > 0; the others are counted in `skipped_nonpositive`.
EvalAggregates aggregate(std::span<const EvalRecord> records);

/// Neumaier-compensated mean.
double compensated_mean(std::span<const double> values);

}  // namespace fam
