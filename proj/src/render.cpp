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

#include "fam/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace fam {
namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};

}  // namespace

std::array<std::uint8_t, 3> heat_color(double t) noexcept {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  if (t < 0.5) {
    const double u = t / 0.5;
    return {0, to_byte(255.0 * u), to_byte(255.0 * (1.0 - u))};
  }
  const double u = (t - 0.5) / 0.5;
  return {to_byte(255.0 * u), to_byte(255.0 * (1.0 - u)), 0};
}

RgbImage render_heatmap(const SaliencyMap& saliency) {
  RgbImage out{saliency.height(), saliency.width(), {}};
  out.pixels.reserve(saliency.size() * 3);
  for (double v : saliency.values()) {
    const auto c = heat_color(v);
    out.pixels.insert(out.pixels.end(), c.begin(), c.end());
  }
  return out;
}

RgbImage tensor_to_rgb(const Tensor& image) {
  if (image.rank() != 3 || image.shape[0] == 0) {
    throw Error(ErrorCode::BadRank, "display image must be a C x H x W tensor");
  }
  const std::size_t h = image.shape[1];
  const std::size_t w = image.shape[2];
  const std::size_t plane = h * w;
  const std::size_t shown = image.shape[0] >= 3 ? 3 : 1;

  const auto [lo_it, hi_it] =
      std::minmax_element(image.values.begin(), image.values.begin() + shown * plane);
  const double lo = *lo_it;
  const double range = *hi_it - lo;

  RgbImage out{h, w, std::vector<std::uint8_t>(plane * 3)};
  for (std::size_t p = 0; p < plane; ++p) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double v = image.values[(shown == 3 ? c : 0) * plane + p];
      out.pixels[p * 3 + c] = range > 0.0 ? to_byte(255.0 * (v - lo) / range) : 0;
    }
  }
  return out;
}

RgbImage overlay(const RgbImage& base, const SaliencyMap& saliency, double alpha) {
  if (base.height != saliency.height() || base.width != saliency.width()) {
    throw Error(ErrorCode::DimMismatch, "overlay needs the saliency map at image resolution");
  }
  RgbImage out = base;
  for (std::size_t p = 0; p < saliency.size(); ++p) {
    const auto heat = heat_color(saliency.values()[p]);
    for (std::size_t c = 0; c < 3; ++c) {
      out.pixels[p * 3 + c] =
          to_byte((1.0 - alpha) * base.pixels[p * 3 + c] + alpha * heat[c]);
    }
  }
  return out;
}

void write_png(const RgbImage& image, const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(ErrorCode::IoFailure, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::IoFailure, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoFailure, "libpng failed writing " + path.string());
  }

  png_init_io(png, file.get());
  png_set_compression_level(png, 9);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t row = 0; row < image.height; ++row) {
    png_write_row(png, const_cast<png_bytep>(image.pixels.data() + row * image.width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace fam
