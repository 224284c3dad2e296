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

#include "fam/similarity.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fam;

namespace {

Embedding E(std::vector<double> v) { return Embedding(std::move(v)); }

double sum(const ContributionWeights& c) {
  double acc = 0.0;
  for (double v : c.values) acc += v;
  return acc;
}

}  // namespace

TEST_SUITE("similarity") {
  TEST_CASE("cosine hand cases") {
    CHECK(cosine(E({3, 4}), E({3, 4})).value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine(E({1, 0}), E({0, 1})).value == 0.0);
    // 3*4 + 4*3 = 24 over 5 * 5
    CHECK(cosine(E({3, 4}), E({4, 3})).value == doctest::Approx(24.0 / 25.0).epsilon(1e-15));
  }

  TEST_CASE("cosine errors") {
    CHECK(test::error_code_of([] { cosine(E({0, 0}), E({1, 1})); }) == ErrorCode::ZeroNorm);
    CHECK(test::error_code_of([] { cosine(E({1, 0}), E({1})); }) == ErrorCode::LengthMismatch);
  }

  TEST_CASE("negative squared euclidean hand cases") {
    CHECK(neg_sq_euclidean(E({2, -1}), E({2, -1})).value == 0.0);
    CHECK(neg_sq_euclidean(E({0, 0}), E({3, 4})).value == -25.0);
    CHECK(neg_sq_euclidean(E({1}), E({2})).value == -1.0);
  }

  TEST_CASE("mean similarity") {
    const MetricSpec cos{MetricKind::Cosine};
    const std::vector<Embedding> same{E({1, 2}), E({1, 2})};
    CHECK(mean_similarity(E({1, 2}), same, cos).value == doctest::Approx(1.0));
    const std::vector<Embedding> one{E({4, 3})};
    CHECK(mean_similarity(E({3, 4}), one, cos).value == cosine(E({3, 4}), E({4, 3})).value);
    // supports at cosine 0.9, 0.6 and 0 to the query [1, 0]
    const std::vector<Embedding> three{E({0.9, std::sqrt(1 - 0.81)}), E({0.6, 0.8}), E({0, 1})};
    CHECK(mean_similarity(E({1, 0}), three, cos).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(test::error_code_of([&] { mean_similarity(E({1}), std::span<const Embedding>{}, cos); }) ==
          ErrorCode::EmptySupportSet);
  }

  TEST_CASE("cosine contributions hand cases") {
    const std::vector<Embedding> s34{E({3, 4})};
    const auto c = cosine_contributions(E({3, 4}), s34);
    CHECK(c.values[0] == doctest::Approx(0.36).epsilon(1e-15));
    CHECK(c.values[1] == doctest::Approx(0.64).epsilon(1e-15));
    CHECK_FALSE(c.normalized);

    const std::vector<Embedding> s10{E({1, 0})};
    const auto d = cosine_contributions(E({1, 0}), s10);
    CHECK(d.values == std::vector<double>{1.0, 0.0});

    const std::vector<Embedding> s01{E({0, 1})};
    CHECK(test::error_code_of([&] { cosine_contributions(E({1, 0}), s01); }) == ErrorCode::ZeroSimilarity);
  }

  TEST_CASE("euclidean contributions hand cases") {
    const std::vector<Embedding> same{E({1, 2}), E({1, 2})};
    CHECK(euclidean_contributions(E({1, 2}), same).values == std::vector<double>{0.0, 0.0});
    const std::vector<Embedding> s34{E({3, 4})};
    CHECK(euclidean_contributions(E({0, 0}), s34).values == std::vector<double>{-9.0, -16.0});
    const std::vector<Embedding> two{E({0}), E({2})};
    CHECK(euclidean_contributions(E({1}), two).values == std::vector<double>{-1.0});
  }

  TEST_CASE("cosine contributions sum to the mean sign of the similarities") {
    oracle::Rng rng(31);
    for (int draw = 0; draw < 300; ++draw) {
      const auto n = static_cast<std::size_t>(rng.integer(1, 64));
      const int k = rng.integer(1, 5);
      const Embedding q = E(rng.normals(n));
      std::vector<Embedding> supports;
      double signs = 0.0;
      for (int i = 0; i < k; ++i) {
        supports.push_back(E(rng.normals(n)));
        signs += cosine(q, supports.back()).value > 0 ? 1.0 : -1.0;
      }
      CHECK(sum(cosine_contributions(q, supports)) == doctest::Approx(signs / k).epsilon(1e-9));
      // without the |s_k| factor the weights sum to the score itself
      const double S = mean_similarity(q, supports, MetricSpec{MetricKind::Cosine}).value;
      CHECK(sum(cosine_contributions(q, supports, ContributionMode::Unnormalized)) ==
            doctest::Approx(S).epsilon(1e-9));
    }
  }

  TEST_CASE("cosine contributions are invariant to positive rescaling") {
    oracle::Rng rng(37);
    for (int draw = 0; draw < 100; ++draw) {
      const auto n = static_cast<std::size_t>(rng.integer(2, 16));
      auto qv = rng.normals(n);
      auto sv = rng.normals(n);
      const auto base = cosine_contributions(E(qv), std::vector<Embedding>{E(sv)});
      const double a = std::exp(rng.uniform(-4, 4));
      for (auto& v : qv) v *= a;
      const auto scaled = cosine_contributions(E(qv), std::vector<Embedding>{E(sv)});
      for (std::size_t i = 0; i < n; ++i) CHECK(scaled.values[i] == doctest::Approx(base.values[i]).epsilon(1e-10));
    }
  }

  TEST_CASE("both metrics are symmetric") {
    oracle::Rng rng(41);
    for (int draw = 0; draw < 100; ++draw) {
      const auto n = static_cast<std::size_t>(rng.integer(1, 32));
      const Embedding a = E(rng.normals(n)), b = E(rng.normals(n));
      CHECK(cosine(a, b).value == doctest::Approx(cosine(b, a).value).epsilon(1e-15));
      CHECK(neg_sq_euclidean(a, b).value == neg_sq_euclidean(b, a).value);
      CHECK(std::abs(cosine(a, b).value) <= 1.0);
    }
  }

  TEST_CASE("euclidean contributions sum to the mean score") {
    oracle::Rng rng(43);
    for (int draw = 0; draw < 300; ++draw) {
      const auto n = static_cast<std::size_t>(rng.integer(1, 64));
      const Embedding q = E(rng.normals(n));
      std::vector<Embedding> supports;
      for (int i = rng.integer(1, 5); i > 0; --i) supports.push_back(E(rng.normals(n)));
      const double S = mean_similarity(q, supports, MetricSpec{MetricKind::NegSqEuclidean}).value;
      CHECK(sum(euclidean_contributions(q, supports)) == doctest::Approx(S).epsilon(1e-9));
    }
  }

  TEST_CASE("manifest spellings") {
    CHECK(parse_metric_kind("cosine") == MetricKind::Cosine);
    CHECK(parse_metric_kind("neg_sq_euclidean") == MetricKind::NegSqEuclidean);
    CHECK(parse_contribution_mode("unnormalized") == ContributionMode::Unnormalized);
    CHECK(test::error_code_of([] { parse_metric_kind("l1"); }) == ErrorCode::BadManifest);
  }
}
