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

// Data-parallel inner loops shared by pooling, map composition, resampling
// and the toy convolutional engine.
//
// Two implementations live behind identical signatures:
//   fam::kernels    OpenMP-parallel, used by the library
//   fam::reference  plain serial loops, kept as the test oracle and the
//                   benchmark baseline
// Every parallel loop is over independent outputs and each output is
// accumulated in the same order as the reference, so the two agree bitwise.

#include <cstddef>
#include <span>
#include <vector>

namespace fam {

struct ConvGeometry {
  std::size_t in_channels = 0;
  std::size_t in_height = 0;
  std::size_t in_width = 0;
  std::size_t out_channels = 0;
  std::size_t kernel = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;

  std::size_t out_height() const noexcept { return (in_height + 2 * padding - kernel) / stride + 1; }
  std::size_t out_width() const noexcept { return (in_width + 2 * padding - kernel) / stride + 1; }
};

struct PoolGeometry {
  std::size_t channels = 0;
  std::size_t in_height = 0;
  std::size_t in_width = 0;
  std::size_t kernel = 2;
  std::size_t stride = 2;

  std::size_t out_height() const noexcept { return (in_height - kernel) / stride + 1; }
  std::size_t out_width() const noexcept { return (in_width - kernel) / stride + 1; }
};

namespace kernels {

std::vector<double> pool_mean(std::span<const double> planes, std::size_t plane_size);
std::vector<double> pool_max(std::span<const double> planes, std::size_t plane_size);
// log-sum-exp pooling with temperature r, max-shifted
std::vector<double> pool_lse(std::span<const double> planes, std::size_t plane_size, double r);
// out[p] = sum_n weights[n] * planes[n][p], summed in ascending n
std::vector<double> weighted_plane_sum(std::span<const double> planes, std::size_t plane_size,
                                       std::span<const double> weights);
// half-pixel-centre bilinear resampling of one plane
std::vector<double> resize_bilinear(std::span<const double> src, std::size_t height,
                                    std::size_t width, std::size_t out_height,
                                    std::size_t out_width);
// cross-correlation with zero padding; weights laid out [out][in][k][k]
std::vector<double> conv2d(std::span<const double> input, std::span<const double> weights,
                           std::span<const double> bias, const ConvGeometry& geometry);
std::vector<double> max_pool2d(std::span<const double> input, const PoolGeometry& geometry);
void leaky_relu_inplace(std::span<double> values, double slope);
// multiplies every plane elementwise by `mask`
std::vector<double> mask_planes(std::span<const double> planes, std::span<const double> mask);

}  // namespace kernels

namespace reference {

std::vector<double> pool_mean(std::span<const double> planes, std::size_t plane_size);
std::vector<double> pool_max(std::span<const double> planes, std::size_t plane_size);
std::vector<double> pool_lse(std::span<const double> planes, std::size_t plane_size, double r);
std::vector<double> weighted_plane_sum(std::span<const double> planes, std::size_t plane_size,
                                       std::span<const double> weights);
std::vector<double> resize_bilinear(std::span<const double> src, std::size_t height,
                                    std::size_t width, std::size_t out_height,
                                    std::size_t out_width);
std::vector<double> conv2d(std::span<const double> input, std::span<const double> weights,
                           std::span<const double> bias, const ConvGeometry& geometry);
std::vector<double> max_pool2d(std::span<const double> input, const PoolGeometry& geometry);
void leaky_relu_inplace(std::span<double> values, double slope);
std::vector<double> mask_planes(std::span<const double> planes, std::span<const double> mask);

}  // namespace reference

}  // namespace fam
