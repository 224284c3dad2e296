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

#include "fam/cam.hpp"

#include <string>

#include "fam/fam.hpp"

namespace fam {

ClassifierWeights::ClassifierWeights(std::size_t classes, std::size_t channels,
                                     std::vector<double> values)
    : classes_(classes), channels_(channels), values_(std::move(values)) {
  if (classes_ == 0 || channels_ == 0) {
    throw Error(ErrorCode::EmptyDimension, "classifier weights have a zero dimension");
  }
  if (values_.size() != classes_ * channels_) {
    throw Error(ErrorCode::DimMismatch, "classifier payload does not match its shape");
  }
  if (!all_finite(values_)) throw Error(ErrorCode::NonFinite, "classifier weights not finite");
}

ClassifierWeights ClassifierWeights::from_tensor(const Tensor& tensor) {
  if (tensor.rank() == 1) return ClassifierWeights(1, tensor.shape[0], tensor.values);
  if (tensor.rank() != 2) {
    throw Error(ErrorCode::BadRank, "classifier weights must be a classes x N matrix");
  }
  return ClassifierWeights(tensor.shape[0], tensor.shape[1], tensor.values);
}

SaliencyMap cam(const FeatureMap& map, const ClassifierWeights& weights, std::size_t class_index) {
  if (class_index >= weights.classes()) {
    throw Error(ErrorCode::BadClassIndex, "class " + std::to_string(class_index) + " of " +
                                              std::to_string(weights.classes()));
  }
  if (weights.channels() != map.channels()) {
    throw Error(ErrorCode::DimMismatch, "classifier has " + std::to_string(weights.channels()) +
                                            " channels, feature map has " +
                                            std::to_string(map.channels()));
  }
  return combine_activation_maps(map, weights.row(class_index));
}

}  // namespace fam
