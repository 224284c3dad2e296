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

#include <string>

#include "fam/types.hpp"

namespace fam {

enum class PoolingKind { GAP, GMP, LSE };

struct PoolingSpec {
  PoolingKind kind = PoolingKind::GAP;
  /// Temperature of log-sum-exp pooling; only read when kind == LSE.
  double lse_r = 1.0;

  static PoolingSpec gap() { return {PoolingKind::GAP, 1.0}; }
  static PoolingSpec gmp() { return {PoolingKind::GMP, 1.0}; }
  static PoolingSpec lse(double r);
};

/// Parses the manifest spelling: "gap", "gmp" or "lse".
PoolingKind parse_pooling_kind(const std::string& name);
std::string to_string(PoolingKind kind);

/// Collapses every activation map to one scalar:
///   GAP  mean over the h*w positions
///   GMP  max over the h*w positions
///   LSE  (1/r) log((1/hw) sum exp(r a)), evaluated max-shifted
Embedding pool(const FeatureMap& map, const PoolingSpec& spec);

}  // namespace fam
