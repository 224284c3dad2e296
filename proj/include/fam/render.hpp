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

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "fam/types.hpp"

namespace fam {

struct RgbImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> pixels;  // interleaved RGB, row-major
};

/// Piecewise-linear blue -> green -> red over [0, 1]; inputs are clamped.
std::array<std::uint8_t, 3> heat_color(double t) noexcept;

/// Colours a [0, 1] saliency map.
RgbImage render_heatmap(const SaliencyMap& saliency);

/// Converts a C x H x W image tensor for display: the first three channels
/// as RGB (a single channel as grey), min-max stretched over the whole image.
RgbImage tensor_to_rgb(const Tensor& image);

/// Alpha-blends the heatmap of `saliency` over `base` at `alpha`.
RgbImage overlay(const RgbImage& base, const SaliencyMap& saliency, double alpha = 0.5);

/// 8-bit RGB PNG, zlib level 9, no timestamp or text chunks, so identical
/// pixels give identical files. Throws IoFailure.
void write_png(const RgbImage& image, const std::filesystem::path& path);

}  // namespace fam
