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

#include <optional>
#include <vector>

#include "fam/types.hpp"

namespace fam {

/// Weights of a bias-free linear projection head, N x J row-major, mapping
/// a pooled convolutional embedding (length N) to the decision space
/// (length J) as Z' = Z W.
class ProjectionWeights {
 public:
  ProjectionWeights(std::size_t rows, std::size_t cols, std::vector<double> values);
  static ProjectionWeights from_tensor(const Tensor& tensor);
  static ProjectionWeights identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t n, std::size_t j) const noexcept { return values_[n * cols_ + j]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// z'_j = sum_n z_n w_{n,j} (+ bias_j when a bias is given).
Embedding project_embedding(const Embedding& z, const ProjectionWeights& w,
                            const std::optional<std::vector<double>>& bias = std::nullopt);

/// Pulls decision-space contributions back to the channel space: C = W C'^T.
/// For every Z this keeps Z . C == (Z W) . C', so each channel inherits the
/// share its projection carries.
ContributionWeights inverse_transform_contributions(const ContributionWeights& c_prime,
                                                    const ProjectionWeights& w);

}  // namespace fam
