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

#include "fam/npy.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>

namespace fam {
namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;
constexpr std::size_t kAlign = 64;

static_assert(std::endian::native == std::endian::little,
              "NPY payloads are read and written in host byte order");

std::string header_dict(const Tensor& tensor) {
  std::ostringstream out;
  out << "{'descr': '" << (tensor.dtype == DType::F32 ? "<f4" : "<f8")
      << "', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < tensor.shape.size(); ++i) {
    if (i > 0) out << ", ";
    out << tensor.shape[i];
  }
  if (tensor.shape.size() == 1) out << ",";
  out << "), }";
  return out.str();
}

std::vector<std::size_t> parse_shape(const std::string& text, const std::string& origin) {
  std::vector<std::size_t> shape;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    auto last = item.find_last_not_of(" \t");
    item = item.substr(first, last - first + 1);
    if (item.empty()) continue;
    if (item.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::BadMagic, origin + ": malformed shape entry '" + item + "'");
    }
    shape.push_back(static_cast<std::size_t>(std::stoull(item)));
  }
  return shape;
}

}  // namespace

Tensor parse_npy(const std::string& bytes, const std::string& origin) {
  if (bytes.size() < kMagicLen + 4 || std::memcmp(bytes.data(), kMagic, kMagicLen) != 0) {
    throw Error(ErrorCode::BadMagic, origin + ": not an NPY file");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  const auto minor = static_cast<unsigned char>(bytes[7]);
  if (major != 1 || minor != 0) {
    throw Error(ErrorCode::BadMagic, origin + ": unsupported NPY version " +
                                         std::to_string(major) + "." + std::to_string(minor));
  }
  const std::size_t header_len = static_cast<unsigned char>(bytes[8]) |
                                 (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
  const std::size_t data_offset = 10 + header_len;
  if (bytes.size() < data_offset) {
    throw Error(ErrorCode::TruncatedPayload, origin + ": header is truncated");
  }
  const std::string header = bytes.substr(10, header_len);

  static const std::regex descr_re(R"('descr'\s*:\s*'([^']*)')");
  static const std::regex order_re(R"('fortran_order'\s*:\s*(True|False))");
  static const std::regex shape_re(R"('shape'\s*:\s*\(([^)]*)\))");
  std::smatch m;

  if (!std::regex_search(header, m, descr_re)) {
    throw Error(ErrorCode::BadMagic, origin + ": header lacks 'descr'");
  }
  const std::string descr = m[1];
  DType dtype;
  if (descr == "<f4") {
    dtype = DType::F32;
  } else if (descr == "<f8") {
    dtype = DType::F64;
  } else {
    throw Error(ErrorCode::UnsupportedDtype, origin + ": dtype '" + descr + "'");
  }

  if (!std::regex_search(header, m, order_re)) {
    throw Error(ErrorCode::BadMagic, origin + ": header lacks 'fortran_order'");
  }
  if (m[1] == "True") {
    throw Error(ErrorCode::UnsupportedDtype, origin + ": fortran-order payloads are not supported");
  }

  if (!std::regex_search(header, m, shape_re)) {
    throw Error(ErrorCode::BadMagic, origin + ": header lacks 'shape'");
  }
  Tensor tensor;
  tensor.dtype = dtype;
  tensor.shape = parse_shape(m[1], origin);
  if (tensor.shape.empty() || tensor.shape.size() > 3) {
    throw Error(ErrorCode::BadRank,
                origin + ": rank " + std::to_string(tensor.shape.size()) + " is outside 1..3");
  }

  const std::size_t count = tensor.element_count();
  const std::size_t width = dtype == DType::F32 ? 4 : 8;
  if (bytes.size() - data_offset < count * width) {
    throw Error(ErrorCode::TruncatedPayload,
                origin + ": expected " + std::to_string(count) + " elements, payload holds " +
                    std::to_string((bytes.size() - data_offset) / width));
  }

  tensor.values.resize(count);
  const char* payload = bytes.data() + data_offset;
  if (dtype == DType::F32) {
    for (std::size_t i = 0; i < count; ++i) {
      float v;
      std::memcpy(&v, payload + i * 4, 4);
      tensor.values[i] = static_cast<double>(v);
    }
  } else {
    std::memcpy(tensor.values.data(), payload, count * 8);
  }
  return tensor;
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::FileNotFound, path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_npy(bytes, path.string());
}

std::string encode_npy(const Tensor& tensor) {
  if (tensor.shape.empty() || tensor.element_count() != tensor.values.size()) {
    throw Error(ErrorCode::DimMismatch, "tensor shape does not match its payload");
  }
  std::string header = header_dict(tensor);
  // magic(6) + version(2) + length(2) + header + '\n' padded to 64 bytes
  const std::size_t unpadded = kMagicLen + 4 + header.size() + 1;
  const std::size_t padded = (unpadded + kAlign - 1) / kAlign * kAlign;
  header.append(padded - unpadded, ' ');
  header.push_back('\n');

  std::string out(kMagic, kMagicLen);
  out.push_back('\x01');
  out.push_back('\x00');
  out.push_back(static_cast<char>(header.size() & 0xff));
  out.push_back(static_cast<char>((header.size() >> 8) & 0xff));
  out += header;

  if (tensor.dtype == DType::F32) {
    for (double v : tensor.values) {
      const auto f = static_cast<float>(v);
      out.append(reinterpret_cast<const char*>(&f), 4);
    }
  } else {
    out.append(reinterpret_cast<const char*>(tensor.values.data()), tensor.values.size() * 8);
  }
  return out;
}

void write_tensor(const Tensor& tensor, const std::filesystem::path& path) {
  if (!all_finite(tensor.values)) {
    throw Error(ErrorCode::NonFinite, "refusing to write NaN/Inf to " + path.string());
  }
  const std::string bytes = encode_npy(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace fam
