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

#include "fam/pooling.hpp"

#include <cmath>

#include "fam/kernels.hpp"

namespace fam {

PoolingSpec PoolingSpec::lse(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::InvalidArgument, "lse_r must be a positive finite number");
  }
  return {PoolingKind::LSE, r};
}

PoolingKind parse_pooling_kind(const std::string& name) {
  if (name == "gap") return PoolingKind::GAP;
  if (name == "gmp") return PoolingKind::GMP;
  if (name == "lse") return PoolingKind::LSE;
  throw Error(ErrorCode::BadManifest, "unknown pooling '" + name + "'");
}

std::string to_string(PoolingKind kind) {
  switch (kind) {
    case PoolingKind::GAP: return "gap";
    case PoolingKind::GMP: return "gmp";
    case PoolingKind::LSE: return "lse";
  }
  return "gap";
}

Embedding pool(const FeatureMap& map, const PoolingSpec& spec) {
  switch (spec.kind) {
    case PoolingKind::GAP:
      return Embedding(kernels::pool_mean(map.values(), map.plane_size()));
    case PoolingKind::GMP:
      return Embedding(kernels::pool_max(map.values(), map.plane_size()));
    case PoolingKind::LSE:
      if (!(spec.lse_r > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "lse_r must be positive");
      }
      return Embedding(kernels::pool_lse(map.values(), map.plane_size(), spec.lse_r));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown pooling kind");
}

}  // namespace fam
