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

#include "fam/types.hpp"

namespace fam {

/// Fully-connected classifier weights, classes x channels row-major.
class ClassifierWeights {
 public:
  ClassifierWeights(std::size_t classes, std::size_t channels, std::vector<double> values);
  static ClassifierWeights from_tensor(const Tensor& tensor);

  std::size_t classes() const noexcept { return classes_; }
  std::size_t channels() const noexcept { return channels_; }
  std::span<const double> row(std::size_t c) const noexcept {
    return std::span<const double>(values_).subspan(c * channels_, channels_);
  }

 private:
  std::size_t classes_;
  std::size_t channels_;
  std::vector<double> values_;
};

// Original class activation map: L = sum_n w_n^c A^n, unnormalized.
// Gradient-based and perturbation-based CAM variants need a trained classifier
// and backward passes, which this tool does not have, so only this form exists.
SaliencyMap cam(const FeatureMap& map, const ClassifierWeights& weights, std::size_t class_index);

}  // namespace fam
