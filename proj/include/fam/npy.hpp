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

#include <filesystem>
#include <string>

#include "fam/types.hpp"

namespace fam {

/// Reads an NPY v1.0 file holding a C-order little-endian float32/float64
/// array of rank 1 to 3. float32 payloads are widened to double exactly and
/// the tensor remembers its on-disk width.
///
/// Throws FileNotFound, BadMagic, UnsupportedDtype, BadRank or TruncatedPayload.
Tensor read_tensor(const std::filesystem::path& path);

/// Decodes an in-memory NPY image; `read_tensor` is a thin wrapper over this.
Tensor parse_npy(const std::string& bytes, const std::string& origin = "<memory>");

/// Encodes `tensor` as NPY v1.0 using `tensor.dtype` as the on-disk width.
std::string encode_npy(const Tensor& tensor);

/// Throws NonFinite for NaN/Inf payloads and IoFailure when the file cannot
/// be written.
void write_tensor(const Tensor& tensor, const std::filesystem::path& path);

}  // namespace fam
