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

// On-disk inputs shared by the CLI tests and the acceptance gate.

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "fam/npy.hpp"
#include "fam/toy_model.hpp"

namespace fam::test {

/// Writes a seeded two-conv toy model description to `dir/model.json`.
inline std::filesystem::path write_seeded_model(const std::filesystem::path& dir, int seed = 7) {
  nlohmann::json doc = {
      {"seed", seed},
      {"layers",
       {{{"type", "conv"}, {"in_channels", 3}, {"out_channels", 8}, {"kernel", 3}, {"padding", 1}},
        {{"type", "leaky_relu"}, {"slope", 0.1}},
        {{"type", "maxpool"}, {"kernel", 2}, {"stride", 2}},
        {{"type", "conv"}, {"in_channels", 8}, {"out_channels", 6}, {"kernel", 3}, {"padding", 1}},
        {{"type", "leaky_relu"}, {"slope", 0.1}}}}};
  const auto path = dir / "model.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

/// A 3 x h x w image with entries uniform in [0, 1) from the MMIX generator.
inline Tensor seeded_image(std::uint64_t seed, std::size_t h = 16, std::size_t w = 16) {
  SeededLcg rng(seed);
  Tensor t{{3, h, w}, std::vector<double>(3 * h * w)};
  for (auto& v : t.values) v = rng.uniform();
  return t;
}

inline void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream(path) << doc.dump(2);
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

}  // namespace fam::test
