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

#include <doctest.h>

#include <cmath>

#include "fam/metrics.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fam;

namespace {

BinaryMask mask_from(std::size_t h, std::size_t w, const std::vector<unsigned char>& px) {
  BinaryMask m(h, w);
  m.pixels = px;
  return m;
}

BinaryMask mask_from_rows(const std::vector<std::string>& rows) {
  BinaryMask m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m.set(r, c, rows[r][c] == '#');
  return m;
}

BoundingBox random_box(oracle::Rng& rng, int h, int w) {
  const int x0 = rng.integer(0, w - 1), y0 = rng.integer(0, h - 1);
  return {x0, y0, rng.integer(x0 + 1, w), rng.integer(y0 + 1, h)};
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("energy proportion hand cases") {
    SaliencyMap m(4, 4, 0.0);
    m.at(1, 1) = 0.5;
    m.at(2, 2) = 1.0;
    CHECK(energy_proportion(m, {1, 1, 3, 3}) == 1.0);
    CHECK(energy_proportion(SaliencyMap(4, 4, 1.0), {0, 0, 2, 2}) == 0.25);
    CHECK(test::error_code_of([] { energy_proportion(SaliencyMap(2, 2, 0.0), {0, 0, 1, 1}); }) ==
          ErrorCode::ZeroEnergy);
    CHECK(test::error_code_of([] { energy_proportion(SaliencyMap(2, 2, 1.0), {0, 0, 3, 1}); }) ==
          ErrorCode::BoxOutOfBounds);
  }

  TEST_CASE("energy proportion matches the pixel-sum oracle on random maps") {
    oracle::Rng rng(61);
    for (int draw = 0; draw < 200; ++draw) {
      std::vector<double> v(32 * 32);
      for (auto& x : v) x = rng.uniform(0, 1);
      const BoundingBox box = random_box(rng, 32, 32);
      CHECK(std::abs(energy_proportion(SaliencyMap(32, 32, v), box) - oracle::energy_by_pixels(v, 32, 32, box)) <=
            1e-12);
    }
  }

  TEST_CASE("energy proportion is invariant to positive scaling") {
    oracle::Rng rng(62);
    for (int draw = 0; draw < 50; ++draw) {
      std::vector<double> v(64);
      for (auto& x : v) x = rng.uniform(0, 1);
      const BoundingBox box = random_box(rng, 8, 8);
      const double a = std::exp(rng.uniform(-5, 5));
      std::vector<double> scaled = v;
      for (auto& x : scaled) x *= a;
      CHECK(energy_proportion(SaliencyMap(8, 8, scaled), box) ==
            doctest::Approx(energy_proportion(SaliencyMap(8, 8, v), box)).epsilon(1e-12));
    }
  }

  TEST_CASE("binarize hand cases") {
    SaliencyMap m(1, 5, {10, 2, 1.999, 0, 5});
    CHECK(binarize(m, 0.2).pixels == std::vector<unsigned char>{1, 1, 0, 0, 1});
    CHECK(binarize(m, 1.0).pixels == std::vector<unsigned char>{1, 0, 0, 0, 0});
    CHECK(binarize(SaliencyMap(2, 2, 0.3), 0.2).count() == 4);
    CHECK(test::error_code_of([] { binarize(SaliencyMap(2, 2, 0.0), 0.2); }) == ErrorCode::NonPositiveMax);
    CHECK(test::error_code_of([] { binarize(SaliencyMap(2, 2, 1.0), 0.0); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("largest component hand cases") {
    const auto blob = mask_from_rows({"....", ".##.", ".#..", "...."});
    CHECK(largest_component(blob) == blob);

    const auto three_five = mask_from_rows({"###....", ".......", "...##..", "...###."});
    CHECK(largest_component(three_five) == mask_from_rows({".......", ".......", "...##..", "...###."}));

    const auto tie = mask_from_rows({"##...", "##...", ".....", "...##", "...##"});
    CHECK(largest_component(tie) == mask_from_rows({"##...", "##...", ".....", ".....", "....."}));

    // diagonal neighbours join
    const auto diag = mask_from_rows({"#...", ".#..", "..#.", "##.."});
    CHECK(largest_component(diag).count() == 5);

    CHECK(test::error_code_of([] { largest_component(BinaryMask(3, 3)); }) == ErrorCode::EmptyMask);
  }

  TEST_CASE("estimate bbox hand cases") {
    BinaryMask single(5, 5);
    single.set(2, 3, true);
    CHECK(estimate_bbox(single) == BoundingBox{3, 2, 4, 3});
    BinaryMask full(3, 4);
    full.pixels.assign(12, 1);
    CHECK(estimate_bbox(full) == BoundingBox{0, 0, 4, 3});
    const auto ell = mask_from_rows({"........", "..#.....", "..#.....", "..#.....", "..#####.", "........"});
    CHECK(estimate_bbox(ell) == BoundingBox{2, 1, 7, 5});
    CHECK(test::error_code_of([] { estimate_bbox(BinaryMask(2, 2)); }) == ErrorCode::EmptyMask);
  }

  TEST_CASE("iou hand cases") {
    CHECK(iou({1, 1, 5, 4}, {1, 1, 5, 4}) == 1.0);
    CHECK(iou({0, 0, 2, 2}, {2, 0, 4, 2}) == 0.0);
    CHECK(iou({0, 0, 4, 4}, {2, 0, 6, 4}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("iou is symmetric, bounded and agrees with pixel counting") {
    oracle::Rng rng(63);
    for (int draw = 0; draw < 300; ++draw) {
      const BoundingBox a = random_box(rng, 20, 20), b = random_box(rng, 20, 20);
      const double v = iou(a, b);
      CHECK(v == iou(b, a));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v == oracle::iou_by_counting(a, b));
    }
  }

  TEST_CASE("every non-empty 4x4 mask agrees with flood fill and min/max scan") {
    for (int bits = 1; bits < (1 << 16); ++bits) {
      std::vector<unsigned char> px(16);
      for (int i = 0; i < 16; ++i) px[i] = (bits >> i) & 1;
      const auto want = oracle::largest_component(px, 4, 4);
      const BinaryMask got = largest_component(mask_from(4, 4, px));
      REQUIRE(got.pixels == want);
      REQUIRE(estimate_bbox(got) == oracle::bbox(want, 4, 4));
      REQUIRE(estimate_bbox(mask_from(4, 4, px)) == oracle::bbox(px, 4, 4));
    }
  }

  TEST_CASE("random 32x32 masks agree with flood fill") {
    oracle::Rng rng(64);
    for (int draw = 0; draw < 200; ++draw) {
      const double density = rng.uniform(0.05, 0.7);
      std::vector<unsigned char> px(32 * 32);
      for (auto& p : px) p = rng.uniform(0, 1) < density;
      px[static_cast<std::size_t>(rng.integer(0, 1023))] = 1;
      const auto want = oracle::largest_component(px, 32, 32);
      const BinaryMask got = largest_component(mask_from(32, 32, px));
      CHECK(got.pixels == want);
      CHECK(estimate_bbox(got) == oracle::bbox(want, 32, 32));
    }
  }

  TEST_CASE("mask_image") {
    oracle::Rng rng(65);
    const Tensor img{{3, 2, 2}, rng.normals(12)};
    CHECK(mask_image(img, SaliencyMap(2, 2, 1.0)) == img);
    for (double v : mask_image(img, SaliencyMap(2, 2, 0.0)).values) CHECK(v == 0.0);
    const Tensor half = mask_image(img, SaliencyMap(2, 2, {1, 0, 1, 0}));
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(half.values[c * 4 + 0] == img.values[c * 4 + 0]);
      CHECK(half.values[c * 4 + 1] == 0.0);
      CHECK(half.values[c * 4 + 2] == img.values[c * 4 + 2]);
      CHECK(half.values[c * 4 + 3] == 0.0);
    }
    CHECK(test::error_code_of([&] { mask_image(img, SaliencyMap(2, 3, 1.0)); }) == ErrorCode::DimMismatch);
    CHECK(test::error_code_of([&] { mask_image(img, SaliencyMap(2, 2, 1.5)); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("average drop and increase in confidence") {
    const std::vector<double> s{1, 1};
    CHECK(average_drop(s, std::vector<double>{0.5, 1.5}) == 25.0);
    CHECK(increase_confidence(s, std::vector<double>{0.5, 1.5}) == 50.0);
    CHECK(average_drop(s, s) == 0.0);
    CHECK(increase_confidence(s, s) == 0.0);
    CHECK(average_drop(s, std::vector<double>{3, 4}) == 0.0);
    CHECK(increase_confidence(s, std::vector<double>{2, 2}) == 100.0);
    CHECK(test::error_code_of([] { average_drop(std::vector<double>{0.0}, std::vector<double>{1.0}); }) ==
          ErrorCode::ZeroScore);
    CHECK(test::error_code_of([] { average_drop(std::vector<double>{-1.0}, std::vector<double>{1.0}); }) ==
          ErrorCode::NegativeScore);
    CHECK(test::error_code_of([] { average_drop(std::vector<double>{1.0}, std::vector<double>{}); }) ==
          ErrorCode::LengthMismatch);
    CHECK(test::error_code_of([] { increase_confidence({}, {}); }) == ErrorCode::EmptySupportSet);
  }

  TEST_CASE("evaluate_localization") {
    SaliencyMap indicator(6, 8, 0.0);
    for (std::size_t r = 1; r < 4; ++r)
      for (std::size_t c = 2; c < 7; ++c) indicator.at(r, c) = 1.0;
    const auto perfect = evaluate_localization(indicator, {2, 1, 7, 4});
    CHECK(perfect.proportion == 1.0);
    CHECK(perfect.iou == 1.0);

    const auto uniform = evaluate_localization(SaliencyMap(6, 8, 0.4), {0, 0, 4, 3});
    CHECK(uniform.proportion == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(uniform.estimated == BoundingBox{0, 0, 8, 6});
    CHECK(uniform.iou == 0.25);
  }

  TEST_CASE("evaluate_localization matches composed oracles") {
    oracle::Rng rng(66);
    for (int draw = 0; draw < 100; ++draw) {
      std::vector<double> v(16 * 16);
      for (auto& x : v) x = rng.uniform(-1, 3);
      const BoundingBox gt = random_box(rng, 16, 16);
      const auto got = evaluate_localization(SaliencyMap(16, 16, v), gt);
      const double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
      std::vector<double> n(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) n[i] = (v[i] - lo) / (hi - lo);
      std::vector<unsigned char> bin(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) bin[i] = n[i] >= 0.2;
      const BoundingBox est = oracle::bbox(oracle::largest_component(bin, 16, 16), 16, 16);
      CHECK(std::abs(got.proportion - oracle::energy_by_pixels(n, 16, 16, gt)) <= 1e-12);
      CHECK(got.estimated == est);
      CHECK(got.iou == oracle::iou_by_counting(est, gt));
    }
  }

  TEST_CASE("aggregate skips non-positive scores for faithfulness") {
    std::vector<EvalRecord> records{
        {"a", 0.5, 0.25, 1.0, 0.5},
        {"b", 1.0, 0.75, 1.0, 1.5},
        {"c", std::nullopt, std::nullopt, -0.5, 0.2},
    };
    const EvalAggregates agg = aggregate(records);
    CHECK(agg.count == 3);
    CHECK(agg.skipped_nonpositive == 1);
    CHECK(*agg.mean_proportion == 0.75);
    CHECK(*agg.mean_iou == 0.5);
    CHECK(*agg.average_drop == 25.0);
    CHECK(*agg.increase_in_confidence == 50.0);
  }

  TEST_CASE("compensated mean") {
    const std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    CHECK(compensated_mean(v) == 0.5);
  }
}
