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

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "fam/kernels.hpp"

namespace fam::kernels {
namespace {

// Below this many outputs the fork/join overhead dominates.
constexpr std::int64_t kParallelThreshold = 4096;

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

std::vector<Tap> bilinear_taps(std::size_t in_len, std::size_t out_len) {
  std::vector<Tap> taps(out_len);
  const double scale = static_cast<double>(in_len) / static_cast<double>(out_len);
  const double last = static_cast<double>(in_len - 1);
  for (std::size_t i = 0; i < out_len; ++i) {
    double src = (static_cast<double>(i) + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, last);
    const auto lo = static_cast<std::size_t>(std::floor(src));
    taps[i] = {lo, std::min(lo + 1, in_len - 1), src - static_cast<double>(lo)};
  }
  return taps;
}

}  // namespace

std::vector<double> pool_mean(std::span<const double> planes, std::size_t plane_size) {
  const auto channels = static_cast<std::int64_t>(planes.size() / plane_size);
  std::vector<double> out(static_cast<std::size_t>(channels));
#pragma omp parallel for schedule(static) if (channels * static_cast<std::int64_t>(plane_size) > kParallelThreshold)
  for (std::int64_t n = 0; n < channels; ++n) {
    const double* p = planes.data() + n * plane_size;
    double sum = 0.0;
    for (std::size_t i = 0; i < plane_size; ++i) sum += p[i];
    out[n] = sum / static_cast<double>(plane_size);
  }
  return out;
}

std::vector<double> pool_max(std::span<const double> planes, std::size_t plane_size) {
  const auto channels = static_cast<std::int64_t>(planes.size() / plane_size);
  std::vector<double> out(static_cast<std::size_t>(channels));
#pragma omp parallel for schedule(static) if (channels * static_cast<std::int64_t>(plane_size) > kParallelThreshold)
  for (std::int64_t n = 0; n < channels; ++n) {
    const double* p = planes.data() + n * plane_size;
    out[n] = *std::max_element(p, p + plane_size);
  }
  return out;
}

std::vector<double> pool_lse(std::span<const double> planes, std::size_t plane_size, double r) {
  const auto channels = static_cast<std::int64_t>(planes.size() / plane_size);
  std::vector<double> out(static_cast<std::size_t>(channels));
#pragma omp parallel for schedule(static) if (channels * static_cast<std::int64_t>(plane_size) > kParallelThreshold)
  for (std::int64_t n = 0; n < channels; ++n) {
    const double* p = planes.data() + n * plane_size;
    const double m = *std::max_element(p, p + plane_size);
    double sum = 0.0;
    for (std::size_t i = 0; i < plane_size; ++i) sum += std::exp(r * (p[i] - m));
    out[n] = m + std::log(sum / static_cast<double>(plane_size)) / r;
  }
  return out;
}

std::vector<double> weighted_plane_sum(std::span<const double> planes, std::size_t plane_size,
                                       std::span<const double> weights) {
  const std::size_t channels = weights.size();
  const auto pixels = static_cast<std::int64_t>(plane_size);
  std::vector<double> out(plane_size, 0.0);
#pragma omp parallel for schedule(static) if (pixels * static_cast<std::int64_t>(channels) > kParallelThreshold)
  for (std::int64_t p = 0; p < pixels; ++p) {
    double acc = 0.0;
    for (std::size_t n = 0; n < channels; ++n) acc += weights[n] * planes[n * plane_size + p];
    out[p] = acc;
  }
  return out;
}

std::vector<double> resize_bilinear(std::span<const double> src, std::size_t height,
                                    std::size_t width, std::size_t out_height,
                                    std::size_t out_width) {
  const auto rows = bilinear_taps(height, out_height);
  const auto cols = bilinear_taps(width, out_width);
  std::vector<double> out(out_height * out_width);
  const auto oh = static_cast<std::int64_t>(out_height);
#pragma omp parallel for schedule(static) if (oh * static_cast<std::int64_t>(out_width) > kParallelThreshold)
  for (std::int64_t y = 0; y < oh; ++y) {
    const Tap& ty = rows[y];
    const double* top = src.data() + ty.lo * width;
    const double* bottom = src.data() + ty.hi * width;
    for (std::size_t x = 0; x < out_width; ++x) {
      const Tap& tx = cols[x];
      const double upper = (1.0 - tx.frac) * top[tx.lo] + tx.frac * top[tx.hi];
      const double lower = (1.0 - tx.frac) * bottom[tx.lo] + tx.frac * bottom[tx.hi];
      out[y * out_width + x] = (1.0 - ty.frac) * upper + ty.frac * lower;
    }
  }
  return out;
}

std::vector<double> conv2d(std::span<const double> input, std::span<const double> weights,
                           std::span<const double> bias, const ConvGeometry& g) {
  const std::size_t oh = g.out_height();
  const std::size_t ow = g.out_width();
  const std::size_t k = g.kernel;
  const auto ih = static_cast<std::int64_t>(g.in_height);
  const auto iw = static_cast<std::int64_t>(g.in_width);
  const auto pad = static_cast<std::int64_t>(g.padding);
  std::vector<double> out(g.out_channels * oh * ow);
  const auto work = static_cast<std::int64_t>(g.out_channels * oh);

#pragma omp parallel for schedule(static) if (work * static_cast<std::int64_t>(ow * g.in_channels * k * k) > kParallelThreshold)
  for (std::int64_t job = 0; job < work; ++job) {
    const std::size_t oc = static_cast<std::size_t>(job) / oh;
    const std::size_t oy = static_cast<std::size_t>(job) % oh;
    const double b = bias.empty() ? 0.0 : bias[oc];
    for (std::size_t ox = 0; ox < ow; ++ox) {
      double acc = b;
      for (std::size_t ic = 0; ic < g.in_channels; ++ic) {
        const double* w = weights.data() + ((oc * g.in_channels + ic) * k) * k;
        const double* plane = input.data() + ic * g.in_height * g.in_width;
        for (std::size_t ky = 0; ky < k; ++ky) {
          const std::int64_t iy = static_cast<std::int64_t>(oy * g.stride + ky) - pad;
          if (iy < 0 || iy >= ih) continue;
          for (std::size_t kx = 0; kx < k; ++kx) {
            const std::int64_t ix = static_cast<std::int64_t>(ox * g.stride + kx) - pad;
            if (ix < 0 || ix >= iw) continue;
            acc += w[ky * k + kx] * plane[iy * iw + ix];
          }
        }
      }
      out[(oc * oh + oy) * ow + ox] = acc;
    }
  }
  return out;
}

std::vector<double> max_pool2d(std::span<const double> input, const PoolGeometry& g) {
  const std::size_t oh = g.out_height();
  const std::size_t ow = g.out_width();
  std::vector<double> out(g.channels * oh * ow);
  const auto work = static_cast<std::int64_t>(g.channels * oh);
#pragma omp parallel for schedule(static) if (work * static_cast<std::int64_t>(ow) > kParallelThreshold)
  for (std::int64_t job = 0; job < work; ++job) {
    const std::size_t c = static_cast<std::size_t>(job) / oh;
    const std::size_t oy = static_cast<std::size_t>(job) % oh;
    const double* plane = input.data() + c * g.in_height * g.in_width;
    for (std::size_t ox = 0; ox < ow; ++ox) {
      double best = plane[(oy * g.stride) * g.in_width + ox * g.stride];
      for (std::size_t ky = 0; ky < g.kernel; ++ky)
        for (std::size_t kx = 0; kx < g.kernel; ++kx)
          best = std::max(best, plane[(oy * g.stride + ky) * g.in_width + ox * g.stride + kx]);
      out[(c * oh + oy) * ow + ox] = best;
    }
  }
  return out;
}

void leaky_relu_inplace(std::span<double> values, double slope) {
  const auto n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    if (values[i] < 0.0) values[i] *= slope;
  }
}

std::vector<double> mask_planes(std::span<const double> planes, std::span<const double> mask) {
  const auto n = static_cast<std::int64_t>(planes.size());
  const std::size_t plane_size = mask.size();
  std::vector<double> out(planes.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) out[i] = planes[i] * mask[static_cast<std::size_t>(i) % plane_size];
  return out;
}

}  // namespace fam::kernels
