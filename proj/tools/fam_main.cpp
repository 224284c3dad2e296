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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fam/cli/commands.hpp"
#include "fam/cli/log.hpp"

namespace {

constexpr int kExitFailure = 2;
constexpr int kExitAllFailed = 1;

int report_error(const fam::Error& e) {
  std::cerr << "error: " << e.what() << '\n';
  return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fam - feature activation maps for similarity-based classifiers"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string explain_out;
  bool explain_ignore_bias = false;
  auto* explain = app.add_subcommand("explain", "Compute a feature activation map from a manifest");
  explain->add_option("--manifest", manifest_path, "Experiment manifest (JSON)")->required();
  explain->add_option("--out", explain_out, "Output directory (overrides the manifest)");
  explain->add_flag("--ignore-bias", explain_ignore_bias,
                    "Accept a projection bias; it is not used when mapping contributions back");

  std::string corpus_path;
  std::string model_path;
  std::string report_path;
  int jobs = 0;
  std::optional<double> threshold;
  bool eval_ignore_bias = false;
  auto* eval = app.add_subcommand("eval", "Evaluate localization and faithfulness over a corpus");
  eval->add_option("--corpus", corpus_path, "Corpus manifest (JSON)")->required();
  eval->add_option("--model", model_path, "Model description used to re-score masked images");
  eval->add_option("--jobs", jobs, "Worker count (default: logical cores)")->check(CLI::NonNegativeNumber);
  eval->add_option("--threshold", threshold, "Binarization fraction of the map maximum");
  eval->add_option("--out", report_path, "Write the report here instead of stdout");
  eval->add_flag("--ignore-bias", eval_ignore_bias, "Accept a projection bias");

  fam::cli::CamOptions cam_options;
  std::string cam_image;
  auto* cam = app.add_subcommand("cam", "Class activation map from FC classifier weights");
  cam->add_option("--features", cam_options.features, "Feature map NPY (N x h x w)")->required();
  cam->add_option("--weights", cam_options.weights, "Classifier weights NPY (classes x N)")->required();
  cam->add_option("--class", cam_options.class_index, "Class index")->required();
  cam->add_option("--out", cam_options.out_dir, "Output directory")->required();
  cam->add_option("--image", cam_image, "Optional C x H x W image NPY for an overlay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFailure;
  }

  try {
    if (*explain) {
      fam::cli::ExplainOptions options;
      if (!explain_out.empty()) options.out_dir = explain_out;
      options.ignore_bias = explain_ignore_bias;
      const auto outcome =
          fam::cli::run_explain(fam::cli::load_experiment_manifest(manifest_path), options);
      for (const auto& err : outcome.errors) std::cerr << "error: " << err << '\n';
      return outcome.errors.empty() ? 0 : kExitFailure;
    }
    if (*eval) {
      fam::cli::EvalOptions options;
      if (!model_path.empty()) options.model = model_path;
      options.jobs = jobs;
      options.threshold = threshold;
      options.ignore_bias = eval_ignore_bias;
      const auto report = fam::cli::run_eval(fam::cli::load_corpus_manifest(corpus_path), options);
      const auto doc = fam::cli::report_to_json(report);
      if (report_path.empty()) {
        std::cout << doc.dump(2) << '\n';
      } else {
        fam::cli::write_json(doc, report_path);
      }
      if (report.images.empty()) {
        std::cerr << "error: no image could be evaluated\n";
        return kExitAllFailed;
      }
      return 0;
    }
    if (*cam) {
      if (!cam_image.empty()) cam_options.image = cam_image;
      fam::cli::run_cam(cam_options);
      return 0;
    }
  } catch (const fam::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: InternalError: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
