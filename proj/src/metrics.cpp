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

#include "fam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fam/fam.hpp"
#include "fam/kernels.hpp"

namespace fam {
namespace {

// Disjoint-set forest over provisional labels; the root is always the
// smallest label of its set, which is also the first-scanned pixel.
class LabelForest {
 public:
  std::size_t make() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
};

void check_scores(std::span<const double> s, std::span<const double> s_masked) {
  if (s.size() != s_masked.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(s.size()) + " scores vs " +
                                               std::to_string(s_masked.size()) + " masked scores");
  }
  if (s.empty()) throw Error(ErrorCode::EmptySupportSet, "no scores to aggregate");
}

}  // namespace

double energy_proportion(const SaliencyMap& saliency, const BoundingBox& box) {
  check_box_within(box, saliency.height(), saliency.width());
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t row = 0; row < saliency.height(); ++row) {
    double row_total = 0.0;
    double row_inside = 0.0;
    const bool row_in = static_cast<long>(row) >= box.y0 && static_cast<long>(row) < box.y1;
    for (std::size_t col = 0; col < saliency.width(); ++col) {
      const double v = saliency.at(row, col);
      if (v < 0.0) throw Error(ErrorCode::InvalidArgument, "saliency has negative values");
      row_total += v;
    }
    if (row_in) {
      for (long col = box.x0; col < box.x1; ++col) {
        row_inside += saliency.at(row, static_cast<std::size_t>(col));
      }
    }
    total += row_total;
    inside += row_inside;
  }
  if (total <= 0.0) throw Error(ErrorCode::ZeroEnergy, "saliency map has no energy");
  return std::min(1.0, inside / total);
}

BinaryMask binarize(const SaliencyMap& map, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold fraction must lie in (0, 1]");
  }
  const auto values = map.values();
  const double peak = *std::max_element(values.begin(), values.end());
  if (!(peak > 0.0)) throw Error(ErrorCode::NonPositiveMax, "saliency maximum is not positive");
  const double threshold = fraction * peak;
  BinaryMask mask(map.height(), map.width());
  for (std::size_t i = 0; i < values.size(); ++i) mask.pixels[i] = values[i] >= threshold ? 1 : 0;
  return mask;
}

BinaryMask largest_component(const BinaryMask& mask) {
  const std::size_t h = mask.height;
  const std::size_t w = mask.width;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(h * w, kNone);
  LabelForest forest;

  // First pass: provisional labels from the already-visited 8-neighbourhood
  // (W, NW, N, NE).
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!mask.at(r, c)) continue;
      std::size_t current = kNone;
      auto join = [&](std::size_t rr, std::size_t cc) {
        const std::size_t l = label[rr * w + cc];
        if (l == kNone) return;
        if (current == kNone) {
          current = l;
        } else {
          forest.unite(current, l);
        }
      };
      if (c > 0) join(r, c - 1);
      if (r > 0) {
        if (c > 0) join(r - 1, c - 1);
        join(r - 1, c);
        if (c + 1 < w) join(r - 1, c + 1);
      }
      label[r * w + c] = current == kNone ? forest.make() : current;
    }
  }
  if (forest.size() == 0) throw Error(ErrorCode::EmptyMask, "mask has no set pixels");

  std::vector<std::size_t> sizes(forest.size(), 0);
  for (auto& l : label) {
    if (l == kNone) continue;
    l = forest.find(l);
    ++sizes[l];
  }
  // Roots are created in scan order, so the lowest root index among equal
  // sizes owns the earliest pixel.
  std::size_t best = 0;
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    if (sizes[l] > sizes[best]) best = l;
  }

  BinaryMask out(h, w);
  for (std::size_t i = 0; i < label.size(); ++i) out.pixels[i] = label[i] == best ? 1 : 0;
  return out;
}

BoundingBox estimate_bbox(const BinaryMask& mask) {
  long x0 = static_cast<long>(mask.width), y0 = static_cast<long>(mask.height);
  long x1 = -1, y1 = -1;
  for (std::size_t r = 0; r < mask.height; ++r) {
    for (std::size_t c = 0; c < mask.width; ++c) {
      if (!mask.at(r, c)) continue;
      x0 = std::min(x0, static_cast<long>(c));
      y0 = std::min(y0, static_cast<long>(r));
      x1 = std::max(x1, static_cast<long>(c));
      y1 = std::max(y1, static_cast<long>(r));
    }
  }
  if (x1 < 0) throw Error(ErrorCode::EmptyMask, "mask has no set pixels");
  return {x0, y0, x1 + 1, y1 + 1};
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  validate_box(a);
  validate_box(b);
  const long iw = std::max(0L, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
  const long ih = std::max(0L, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
  const long inter = iw * ih;
  const long uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Tensor mask_image(const Tensor& image, const SaliencyMap& saliency) {
  if (image.rank() != 3 || image.shape[1] != saliency.height() ||
      image.shape[2] != saliency.width()) {
    throw Error(ErrorCode::DimMismatch, "image must be C x " + std::to_string(saliency.height()) +
                                            " x " + std::to_string(saliency.width()));
  }
  for (double v : saliency.values()) {
    if (v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::InvalidArgument, "masking saliency must lie in [0, 1]");
    }
  }
  Tensor out{image.shape, kernels::mask_planes(image.values, saliency.values()), image.dtype};
  return out;
}

double average_drop(std::span<const double> s, std::span<const double> s_masked) {
  check_scores(s, s_masked);
  std::vector<double> drops(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0.0) throw Error(ErrorCode::ZeroScore, "score " + std::to_string(i) + " is zero");
    if (s[i] < 0.0) {
      throw Error(ErrorCode::NegativeScore, "score " + std::to_string(i) + " is negative");
    }
    drops[i] = std::max(0.0, s[i] - s_masked[i]) / s[i];
  }
  return compensated_mean(drops) * 100.0;
}

double increase_confidence(std::span<const double> s, std::span<const double> s_masked) {
  check_scores(s, s_masked);
  std::size_t increased = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < s_masked[i]) ++increased;
  }
  return static_cast<double>(increased) / static_cast<double>(s.size()) * 100.0;
}

LocalizationResult evaluate_localization(const SaliencyMap& saliency, const BoundingBox& gt,
                                         double fraction) {
  check_box_within(gt, saliency.height(), saliency.width());
  const SaliencyMap map = is_degenerate(saliency.values()) ? saliency : normalize_map(saliency);
  LocalizationResult result;
  result.proportion = energy_proportion(map, gt);
  result.estimated = estimate_bbox(largest_component(binarize(map, fraction)));
  result.iou = iou(result.estimated, gt);
  return result;
}

double compensated_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return (sum + carry) / static_cast<double>(values.size());
}

EvalAggregates aggregate(std::span<const EvalRecord> records) {
  EvalAggregates agg;
  agg.count = records.size();
  std::vector<double> proportions, ious, s, s_masked;
  for (const auto& r : records) {
    if (r.proportion) proportions.push_back(*r.proportion);
    if (r.iou) ious.push_back(*r.iou);
    if (r.s && r.s_masked) {
      if (*r.s > 0.0) {
        s.push_back(*r.s);
        s_masked.push_back(*r.s_masked);
      } else {
        ++agg.skipped_nonpositive;
      }
    }
  }
  if (!proportions.empty()) agg.mean_proportion = compensated_mean(proportions);
  if (!ious.empty()) agg.mean_iou = compensated_mean(ious);
  if (!s.empty()) {
    agg.average_drop = average_drop(s, s_masked);
    agg.increase_in_confidence = increase_confidence(s, s_masked);
  }
  return agg;
}

}  // namespace fam
