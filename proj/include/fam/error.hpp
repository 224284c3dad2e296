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

#include <stdexcept>
#include <string>
#include <string_view>

namespace fam {

enum class ErrorCode {
  // tensors and files
  NonFinite,
  EmptyDimension,
  BadRank,
  BadMagic,
  UnsupportedDtype,
  TruncatedPayload,
  IoFailure,
  FileNotFound,
  // similarity
  ZeroNorm,
  LengthMismatch,
  EmptySupportSet,
  ZeroSimilarity,
  // maps and transforms
  DimMismatch,
  NotNormalized,
  BiasUnsupported,
  BadClassIndex,
  // metrics
  ZeroEnergy,
  BoxOutOfBounds,
  NonPositiveMax,
  EmptyMask,
  ZeroScore,
  NegativeScore,
  // toy model
  KernelLargerThanPaddedInput,
  WindowTooLarge,
  // configuration
  BadManifest,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every failure in the library surfaces as an Error carrying a stable code.
/// The CLI prints `error_name(code())` so scripts can match on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fam
