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

#include <cstddef>
#include <span>
#include <vector>

#include "fam/error.hpp"

namespace fam {

/// Storage width of a tensor on disk. Values are always held as double in
/// memory; the width only decides how `write_tensor` encodes them.
enum class DType { F32, F64 };

/// A dense row-major tensor of rank 1 to 3, as exchanged through NPY files.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;
  DType dtype = DType::F64;

  std::size_t rank() const noexcept { return shape.size(); }
  std::size_t element_count() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

bool all_finite(std::span<const double> values) noexcept;

/// Last-convolutional-layer activations: `channels` activation maps of
/// `height` x `width`, stored channel-major.
class FeatureMap {
 public:
  FeatureMap(std::size_t channels, std::size_t height, std::size_t width,
             std::vector<double> values);

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> channel(std::size_t n) const noexcept {
    return std::span<const double>(values_).subspan(n * plane_size(), plane_size());
  }
  double at(std::size_t n, std::size_t row, std::size_t col) const noexcept {
    return values_[(n * height_ + row) * width_ + col];
  }

  Tensor to_tensor() const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::size_t channels_;
  std::size_t height_;
  std::size_t width_;
  std::vector<double> values_;
};

/// Checks a raw rank-3 tensor and wraps it as a FeatureMap.
/// Throws BadRank, EmptyDimension or NonFinite.
FeatureMap validate_feature_map(const Tensor& raw);

/// A pooled feature vector (query, support, or projected).
class Embedding {
 public:
  explicit Embedding(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::vector<double> values_;
};

/// Per-channel share of a similarity score. `normalized` is set only by
/// `normalize_weights`, which guarantees values in [0, 1].
struct ContributionWeights {
  std::vector<double> values;
  bool normalized = false;

  std::size_t size() const noexcept { return values.size(); }
};

class SaliencyMap {
 public:
  SaliencyMap(std::size_t height, std::size_t width, std::vector<double> values);
  SaliencyMap(std::size_t height, std::size_t width, double fill);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double at(std::size_t row, std::size_t col) const noexcept {
    return values_[row * width_ + col];
  }
  double& at(std::size_t row, std::size_t col) noexcept {
    return values_[row * width_ + col];
  }

  Tensor to_tensor() const;

  friend bool operator==(const SaliencyMap&, const SaliencyMap&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> values_;
};

/// Axis-aligned pixel box, half-open: columns [x0, x1), rows [y0, y1).
struct BoundingBox {
  long x0 = 0;
  long y0 = 0;
  long x1 = 0;
  long y1 = 0;

  long width() const noexcept { return x1 - x0; }
  long height() const noexcept { return y1 - y0; }
  long area() const noexcept { return width() * height(); }

  /// Builds a box from the annotation convention (x, y, width, height).
  static BoundingBox from_xywh(long x, long y, long w, long h);

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Throws InvalidArgument for an empty or inverted box.
void validate_box(const BoundingBox& box);
/// Throws BoxOutOfBounds unless the box lies inside a height x width image.
void check_box_within(const BoundingBox& box, std::size_t height, std::size_t width);

struct BinaryMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<unsigned char> pixels;

  BinaryMask() = default;
  BinaryMask(std::size_t h, std::size_t w) : height(h), width(w), pixels(h * w, 0) {}

  bool at(std::size_t row, std::size_t col) const noexcept {
    return pixels[row * width + col] != 0;
  }
  void set(std::size_t row, std::size_t col, bool on) noexcept {
    pixels[row * width + col] = on ? 1 : 0;
  }
  std::size_t count() const noexcept;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

}  // namespace fam
