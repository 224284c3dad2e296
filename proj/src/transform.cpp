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

#include "fam/transform.hpp"

#include <string>

namespace fam {

ProjectionWeights::ProjectionWeights(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorCode::EmptyDimension, "projection matrix has a zero dimension");
  }
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimMismatch, "projection payload does not match its shape");
  }
  if (!all_finite(values_)) throw Error(ErrorCode::NonFinite, "projection contains NaN or Inf");
}

ProjectionWeights ProjectionWeights::from_tensor(const Tensor& tensor) {
  if (tensor.rank() != 2) {
    throw Error(ErrorCode::BadRank, "projection must be a rank-2 N x J matrix");
  }
  return ProjectionWeights(tensor.shape[0], tensor.shape[1], tensor.values);
}

ProjectionWeights ProjectionWeights::identity(std::size_t n) {
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 1.0;
  return ProjectionWeights(n, n, std::move(values));
}

Embedding project_embedding(const Embedding& z, const ProjectionWeights& w,
                            const std::optional<std::vector<double>>& bias) {
  if (z.size() != w.rows()) {
    throw Error(ErrorCode::DimMismatch, "embedding length " + std::to_string(z.size()) +
                                            " does not match projection rows " +
                                            std::to_string(w.rows()));
  }
  if (bias && bias->size() != w.cols()) {
    throw Error(ErrorCode::DimMismatch, "bias length does not match projection columns");
  }
  std::vector<double> out(w.cols(), 0.0);
  for (std::size_t n = 0; n < w.rows(); ++n) {
    for (std::size_t j = 0; j < w.cols(); ++j) out[j] += z[n] * w.at(n, j);
  }
  if (bias) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += (*bias)[j];
  }
  return Embedding(std::move(out));
}

ContributionWeights inverse_transform_contributions(const ContributionWeights& c_prime,
                                                    const ProjectionWeights& w) {
  if (c_prime.size() != w.cols()) {
    throw Error(ErrorCode::DimMismatch, "contribution length " + std::to_string(c_prime.size()) +
                                            " does not match projection columns " +
                                            std::to_string(w.cols()));
  }
  std::vector<double> c(w.rows(), 0.0);
  for (std::size_t n = 0; n < w.rows(); ++n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.cols(); ++j) acc += w.at(n, j) * c_prime.values[j];
    c[n] = acc;
  }
  return {std::move(c), false};
}

}  // namespace fam
