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

#include <json.hpp>

#include "fam/cli/manifest.hpp"
#include "fam/metrics.hpp"

namespace fam::cli {

struct ExplainOptions {
  std::optional<fs::path> out_dir;  // overrides the manifest's "output"
  bool ignore_bias = false;
};

struct ExplainOutcome {
  fs::path out_dir;
  nlohmann::json metadata;
  /// Outputs that could not be written; empty on full success.
  std::vector<std::string> errors;
};

/// Writes into the output directory:
///   saliency.npy             L_FAM at feature resolution, before map normalization
///   saliency_normalized.npy  norm(up(L_FAM)) at output resolution
///   contributions.npy        channel-space contributions C
///   heatmap.png              overlay on the query image (only with an image)
///   explain.json             score, weight statistics and flags
ExplainOutcome run_explain(const ExperimentManifest& manifest, const ExplainOptions& options);

struct EvalOptions {
  std::optional<fs::path> model;
  /// Worker count; 0 means one per logical core.
  int jobs = 0;
  std::optional<double> threshold;
  bool ignore_bias = false;
};

/// Evaluates every corpus entry independently. Entry failures are recorded
/// and skipped. Records and failures are ordered by image id.
EvalReport run_eval(const CorpusManifest& corpus, const EvalOptions& options);

nlohmann::json report_to_json(const EvalReport& report);

struct CamOptions {
  fs::path features;
  fs::path weights;
  std::size_t class_index = 0;
  fs::path out_dir;
  std::optional<fs::path> image;
};

/// Writes cam.npy (raw L_CAM at feature resolution) and cam.png.
void run_cam(const CamOptions& options);

/// Serializes JSON with a trailing newline, UTF-8, into `path`.
void write_json(const nlohmann::json& doc, const fs::path& path);

}  // namespace fam::cli
