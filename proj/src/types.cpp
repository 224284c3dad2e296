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

#include "fam/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace fam {

std::size_t Tensor::element_count() const noexcept {
  if (shape.empty()) return 0;
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

bool all_finite(std::span<const double> values) noexcept {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

FeatureMap::FeatureMap(std::size_t channels, std::size_t height, std::size_t width,
                       std::vector<double> values)
    : channels_(channels), height_(height), width_(width), values_(std::move(values)) {
  if (channels_ == 0 || height_ == 0 || width_ == 0) {
    throw Error(ErrorCode::EmptyDimension, "feature map has a zero-length dimension");
  }
  if (values_.size() != channels_ * height_ * width_) {
    throw Error(ErrorCode::DimMismatch,
                "feature map expects " + std::to_string(channels_ * height_ * width_) +
                    " values, got " + std::to_string(values_.size()));
  }
  if (!all_finite(values_)) {
    throw Error(ErrorCode::NonFinite, "feature map contains NaN or Inf");
  }
}

Tensor FeatureMap::to_tensor() const {
  return Tensor{{channels_, height_, width_}, values_, DType::F64};
}

FeatureMap validate_feature_map(const Tensor& raw) {
  if (raw.rank() != 3) {
    throw Error(ErrorCode::BadRank,
                "feature map must be rank 3, got rank " + std::to_string(raw.rank()));
  }
  if (raw.element_count() != raw.values.size()) {
    throw Error(ErrorCode::DimMismatch, "tensor shape does not match its payload");
  }
  return FeatureMap(raw.shape[0], raw.shape[1], raw.shape[2], raw.values);
}

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::EmptyDimension, "embedding is empty");
  if (!all_finite(values_)) throw Error(ErrorCode::NonFinite, "embedding contains NaN or Inf");
}

SaliencyMap::SaliencyMap(std::size_t height, std::size_t width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  if (height_ == 0 || width_ == 0) {
    throw Error(ErrorCode::EmptyDimension, "saliency map has a zero-length dimension");
  }
  if (values_.size() != height_ * width_) {
    throw Error(ErrorCode::DimMismatch, "saliency map size does not match its dimensions");
  }
  if (!all_finite(values_)) throw Error(ErrorCode::NonFinite, "saliency map contains NaN or Inf");
}

SaliencyMap::SaliencyMap(std::size_t height, std::size_t width, double fill)
    : SaliencyMap(height, width, std::vector<double>(height * width, fill)) {}

Tensor SaliencyMap::to_tensor() const {
  return Tensor{{height_, width_}, values_, DType::F64};
}

BoundingBox BoundingBox::from_xywh(long x, long y, long w, long h) {
  BoundingBox box{x, y, x + w, y + h};
  validate_box(box);
  return box;
}

void validate_box(const BoundingBox& box) {
  if (box.x0 < 0 || box.y0 < 0 || box.x1 <= box.x0 || box.y1 <= box.y0) {
    throw Error(ErrorCode::InvalidArgument,
                "invalid box [" + std::to_string(box.x0) + "," + std::to_string(box.x1) +
                    ")x[" + std::to_string(box.y0) + "," + std::to_string(box.y1) + ")");
  }
}

void check_box_within(const BoundingBox& box, std::size_t height, std::size_t width) {
  validate_box(box);
  if (box.x1 > static_cast<long>(width) || box.y1 > static_cast<long>(height)) {
    throw Error(ErrorCode::BoxOutOfBounds,
                "box exceeds " + std::to_string(height) + "x" + std::to_string(width) + " image");
  }
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(pixels.begin(), pixels.end(), 1));
}

}  // namespace fam
