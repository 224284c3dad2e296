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
#include <optional>
#include <string>
#include <vector>

#include "fam/fam.hpp"
#include "fam/metrics.hpp"
#include "fam/types.hpp"

namespace fam::cli {

namespace fs = std::filesystem;

/// Settings shared by the explain and corpus manifests. All paths are
/// already resolved against the manifest's directory.
struct ExplainSettings {
  MetricSpec metric;
  PoolingSpec pooling;
  ContributionMode contribution_mode = ContributionMode::SignNormalized;
  std::optional<fs::path> projection;
  std::optional<fs::path> projection_bias;
  double threshold_fraction = kDefaultThresholdFraction;
};

/// Input of `fam explain`:
///
///   {
///     "query": {"features": "q.npy", "image": "img.npy", "bbox": [x, y, w, h]},
///     "supports": ["s1.npy"],            // support feature maps
///     "support_images": ["s1_img.npy"],  // or images run through "model"
///     "model": "model.json",
///     "metric": "cosine" | "neg_sq_euclidean",
///     "pooling": "gap" | "gmp" | "lse", "lse_r": 1.0,
///     "projection": "W.npy", "projection_bias": "b.npy",
///     "contribution_mode": "sign_normalized" | "unnormalized",
///     "threshold_fraction": 0.2,
///     "output_size": [H, W],
///     "injected_weights": "c.npy",
///     "output": "out_dir"
///   }
///
/// Either query.features or query.image + model must be present.
/// "injected_weights" replaces the computed contributions with a raw weight
/// vector that is used without normalization.
struct ExperimentManifest {
  fs::path source;
  std::optional<fs::path> query_features;
  std::optional<fs::path> query_image;
  std::optional<BoundingBox> query_bbox;
  std::vector<fs::path> supports;
  std::vector<fs::path> support_images;
  std::optional<fs::path> model;
  std::optional<fs::path> injected_weights;
  std::optional<std::pair<std::size_t, std::size_t>> output_size;
  ExplainSettings settings;
  fs::path output_dir;
};

struct CorpusEntry {
  std::string id;
  std::optional<fs::path> features;
  std::optional<fs::path> image;
  std::optional<BoundingBox> bbox;
  std::vector<fs::path> supports;
  std::vector<fs::path> support_images;
  /// Set when the entry itself is malformed; it is then reported as a failure.
  std::optional<Error> parse_error;
};

/// Input of `fam eval`: the shared settings at top level plus an "images"
/// array of {"id", "features"?, "image"?, "bbox"?, "supports"?,
/// "support_images"?} entries. Each entry is validated only when it is
/// evaluated so a malformed one cannot sink the whole run.
struct CorpusManifest {
  fs::path source;
  ExplainSettings settings;
  std::vector<CorpusEntry> entries;
};

ExperimentManifest load_experiment_manifest(const fs::path& path);
CorpusManifest load_corpus_manifest(const fs::path& path);

}  // namespace fam::cli
