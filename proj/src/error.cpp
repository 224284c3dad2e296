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

#include "fam/error.hpp"

namespace fam {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptyDimension: return "EmptyDimension";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptySupportSet: return "EmptySupportSet";
    case ErrorCode::ZeroSimilarity: return "ZeroSimilarity";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::BiasUnsupported: return "BiasUnsupported";
    case ErrorCode::BadClassIndex: return "BadClassIndex";
    case ErrorCode::ZeroEnergy: return "ZeroEnergy";
    case ErrorCode::BoxOutOfBounds: return "BoxOutOfBounds";
    case ErrorCode::NonPositiveMax: return "NonPositiveMax";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::ZeroScore: return "ZeroScore";
    case ErrorCode::NegativeScore: return "NegativeScore";
    case ErrorCode::KernelLargerThanPaddedInput: return "KernelLargerThanPaddedInput";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::BadManifest: return "BadManifest";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace fam
