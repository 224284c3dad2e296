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

// Serial reference versions of the kernels in kernels_omp.cpp. Written as
// direct per-output loops with no precomputed tables; keep them that way.

#include <algorithm>
#include <cmath>

#include "fam/kernels.hpp"

namespace fam::reference {

std::vector<double> pool_mean(std::span<const double> planes, std::size_t plane_size) {
  std::vector<double> out;
  for (std::size_t start = 0; start < planes.size(); start += plane_size) {
    double sum = 0.0;
    for (std::size_t i = 0; i < plane_size; ++i) sum += planes[start + i];
    out.push_back(sum / static_cast<double>(plane_size));
  }
  return out;
}

std::vector<double> pool_max(std::span<const double> planes, std::size_t plane_size) {
  std::vector<double> out;
  for (std::size_t start = 0; start < planes.size(); start += plane_size) {
    double best = planes[start];
    for (std::size_t i = 1; i < plane_size; ++i) best = std::max(best, planes[start + i]);
    out.push_back(best);
  }
  return out;
}

std::vector<double> pool_lse(std::span<const double> planes, std::size_t plane_size, double r) {
  std::vector<double> out;
  for (std::size_t start = 0; start < planes.size(); start += plane_size) {
    double m = planes[start];
    for (std::size_t i = 1; i < plane_size; ++i) m = std::max(m, planes[start + i]);
    double sum = 0.0;
    for (std::size_t i = 0; i < plane_size; ++i) sum += std::exp(r * (planes[start + i] - m));
    out.push_back(m + std::log(sum / static_cast<double>(plane_size)) / r);
  }
  return out;
}

std::vector<double> weighted_plane_sum(std::span<const double> planes, std::size_t plane_size,
                                       std::span<const double> weights) {
  std::vector<double> out(plane_size);
  for (std::size_t p = 0; p < plane_size; ++p) {
    double acc = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) acc += weights[n] * planes[n * plane_size + p];
    out[p] = acc;
  }
  return out;
}

std::vector<double> resize_bilinear(std::span<const double> src, std::size_t height,
                                    std::size_t width, std::size_t out_height,
                                    std::size_t out_width) {
  std::vector<double> out(out_height * out_width);
  for (std::size_t y = 0; y < out_height; ++y) {
    for (std::size_t x = 0; x < out_width; ++x) {
      double sy = (static_cast<double>(y) + 0.5) * (static_cast<double>(height) / static_cast<double>(out_height)) - 0.5;
      double sx = (static_cast<double>(x) + 0.5) * (static_cast<double>(width) / static_cast<double>(out_width)) - 0.5;
      sy = std::clamp(sy, 0.0, static_cast<double>(height - 1));
      sx = std::clamp(sx, 0.0, static_cast<double>(width - 1));
      const auto y0 = static_cast<std::size_t>(std::floor(sy));
      const auto x0 = static_cast<std::size_t>(std::floor(sx));
      const std::size_t y1 = std::min(y0 + 1, height - 1);
      const std::size_t x1 = std::min(x0 + 1, width - 1);
      const double fy = sy - static_cast<double>(y0);
      const double fx = sx - static_cast<double>(x0);
      const double upper = (1.0 - fx) * src[y0 * width + x0] + fx * src[y0 * width + x1];
      const double lower = (1.0 - fx) * src[y1 * width + x0] + fx * src[y1 * width + x1];
      out[y * out_width + x] = (1.0 - fy) * upper + fy * lower;
    }
  }
  return out;
}

std::vector<double> conv2d(std::span<const double> input, std::span<const double> weights,
                           std::span<const double> bias, const ConvGeometry& g) {
  const std::size_t oh = g.out_height();
  const std::size_t ow = g.out_width();
  const std::size_t k = g.kernel;
  std::vector<double> out(g.out_channels * oh * ow);
  for (std::size_t oc = 0; oc < g.out_channels; ++oc) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox) {
        double acc = bias.empty() ? 0.0 : bias[oc];
        for (std::size_t ic = 0; ic < g.in_channels; ++ic) {
          for (std::size_t ky = 0; ky < k; ++ky) {
            for (std::size_t kx = 0; kx < k; ++kx) {
              const long iy = static_cast<long>(oy * g.stride + ky) - static_cast<long>(g.padding);
              const long ix = static_cast<long>(ox * g.stride + kx) - static_cast<long>(g.padding);
              if (iy < 0 || ix < 0 || iy >= static_cast<long>(g.in_height) ||
                  ix >= static_cast<long>(g.in_width)) {
                continue;
              }
              const double w = weights[((oc * g.in_channels + ic) * k + ky) * k + kx];
              acc += w * input[(ic * g.in_height + static_cast<std::size_t>(iy)) * g.in_width +
                               static_cast<std::size_t>(ix)];
            }
          }
        }
        out[(oc * oh + oy) * ow + ox] = acc;
      }
    }
  }
  return out;
}

std::vector<double> max_pool2d(std::span<const double> input, const PoolGeometry& g) {
  const std::size_t oh = g.out_height();
  const std::size_t ow = g.out_width();
  std::vector<double> out(g.channels * oh * ow);
  for (std::size_t c = 0; c < g.channels; ++c) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox) {
        double best = -INFINITY;
        for (std::size_t ky = 0; ky < g.kernel; ++ky) {
          for (std::size_t kx = 0; kx < g.kernel; ++kx) {
            const std::size_t iy = oy * g.stride + ky;
            const std::size_t ix = ox * g.stride + kx;
            best = std::max(best, input[(c * g.in_height + iy) * g.in_width + ix]);
          }
        }
        out[(c * oh + oy) * ow + ox] = best;
      }
    }
  }
  return out;
}

void leaky_relu_inplace(std::span<double> values, double slope) {
  for (double& v : values) v = v >= 0.0 ? v : slope * v;
}

std::vector<double> mask_planes(std::span<const double> planes, std::span<const double> mask) {
  std::vector<double> out(planes.size());
  const std::size_t plane_size = mask.size();
  for (std::size_t c = 0; c * plane_size < planes.size(); ++c) {
    for (std::size_t p = 0; p < plane_size; ++p) {
      out[c * plane_size + p] = planes[c * plane_size + p] * mask[p];
    }
  }
  return out;
}

}  // namespace fam::reference
