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

#include "fam/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <variant>

#include "fam/cam.hpp"
#include "fam/cli/log.hpp"
#include "fam/fam.hpp"
#include "fam/npy.hpp"
#include "fam/render.hpp"
#include "fam/toy_model.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fam::cli {
namespace {

using nlohmann::json;

FeatureMap load_feature_map(const fs::path& path) { return validate_feature_map(read_tensor(path)); }

Tensor load_image(const fs::path& path) {
  Tensor image = read_tensor(path);
  if (image.rank() != 3) throw Error(ErrorCode::BadRank, path.string() + ": image must be C x H x W");
  if (!all_finite(image.values)) throw Error(ErrorCode::NonFinite, path.string());
  return image;
}

FamOptions fam_options(const ExplainSettings& settings, bool ignore_bias) {
  FamOptions o;
  o.metric = settings.metric;
  o.pooling = settings.pooling;
  o.contribution_mode = settings.contribution_mode;
  o.ignore_bias = ignore_bias;
  if (settings.projection) {
    o.projection = ProjectionWeights::from_tensor(read_tensor(*settings.projection));
  }
  if (settings.projection_bias) {
    const Tensor bias = read_tensor(*settings.projection_bias);
    if (bias.rank() != 1) throw Error(ErrorCode::BadRank, "projection bias must be a vector");
    o.projection_bias = bias.values;
  }
  return o;
}

json weight_stats(std::span<const double> values) {
  if (values.empty()) return nullptr;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return {{"min", *lo},
          {"max", *hi},
          {"sum", sum},
          {"mean", sum / static_cast<double>(values.size())},
          {"count", values.size()}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json box_to_json(const BoundingBox& b) { return {b.x0, b.y0, b.width(), b.height()}; }

}  // namespace

void write_json(const json& doc, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

ExplainOutcome run_explain(const ExperimentManifest& manifest, const ExplainOptions& options) {
  const ExplainSettings& settings = manifest.settings;
  FamOptions fam = fam_options(settings, options.ignore_bias);

  std::optional<ModelSpec> model;
  if (manifest.model) model = load_model_spec(*manifest.model);
  std::optional<Tensor> image;
  if (manifest.query_image) image = load_image(*manifest.query_image);

  const FeatureMap query =
      manifest.query_features ? load_feature_map(*manifest.query_features) : forward(*model, *image);

  std::vector<FeatureMap> supports;
  for (const auto& p : manifest.supports) supports.push_back(load_feature_map(p));
  for (const auto& p : manifest.support_images) supports.push_back(forward(*model, load_image(p)));
  log(LogLevel::Info, "explain: " + std::to_string(query.channels()) + " channels, " +
                          std::to_string(supports.size()) + " supports");

  if (manifest.output_size) {
    std::tie(fam.out_height, fam.out_width) = *manifest.output_size;
  } else if (image) {
    fam.out_height = image->shape[1];
    fam.out_width = image->shape[2];
  }

  json meta;
  meta["metric"] = to_string(settings.metric.kind);
  meta["pooling"] = to_string(settings.pooling.kind);
  meta["lse_r"] = settings.pooling.lse_r;
  meta["contribution_mode"] = to_string(settings.contribution_mode);
  meta["channels"] = query.channels();
  meta["supports"] = supports.size();
  meta["feature_size"] = {query.height(), query.width()};
  meta["projection"] = fam.projection ? json{fam.projection->rows(), fam.projection->cols()} : json(nullptr);
  meta["ignore_bias"] = options.ignore_bias;

  std::optional<SaliencyMap> raw;
  std::optional<SaliencyMap> saliency;
  std::vector<double> contribution_values;

  if (manifest.injected_weights) {
    const Tensor w = read_tensor(*manifest.injected_weights);
    if (w.rank() != 1) throw Error(ErrorCode::BadRank, "injected weights must be a vector");
    raw = combine_activation_maps(query, w.values);
    const std::size_t oh = fam.out_height ? fam.out_height : query.height();
    const std::size_t ow = fam.out_width ? fam.out_width : query.width();
    saliency = normalize_map(upsample_bilinear(*raw, oh, ow));
    contribution_values = w.values;
    meta["injected_weights"] = true;
    meta["degenerate_normalization"] = false;
    meta["single_channel"] = query.channels() == 1;
    meta["score"] = nullptr;
    if (!supports.empty()) {
      std::vector<Embedding> decision;
      for (const auto& s : supports) decision.push_back(to_decision_space(pool(s, fam.pooling), fam));
      const Embedding q = to_decision_space(pool(query, fam.pooling), fam);
      meta["score"] = mean_similarity(q, decision, fam.metric).value;
    }
    meta["weights"] = weight_stats(contribution_values);
  } else {
    FamResult result = fam_pipeline(query, supports, fam);
    meta["injected_weights"] = false;
    meta["score"] = result.score;
    meta["degenerate_normalization"] = result.degenerate_normalization;
    meta["single_channel"] = result.single_channel;
    meta["weights"] = weight_stats(result.contributions.values);
    meta["decision_weights"] = result.decision_contributions
                                   ? weight_stats(result.decision_contributions->values)
                                   : json(nullptr);
    if (result.degenerate_normalization) {
      log(LogLevel::Warn, "contribution weights are constant; the explanation map is empty");
    }
    contribution_values = std::move(result.contributions.values);
    raw = std::move(result.raw);
    saliency = std::move(result.saliency);
  }
  meta["output_size"] = {saliency->height(), saliency->width()};

  if (manifest.query_bbox) {
    try {
      const SaliencyMap at_image =
          image ? normalize_map(upsample_bilinear(*raw, image->shape[1], image->shape[2])) : *saliency;
      const auto loc = evaluate_localization(at_image, *manifest.query_bbox, settings.threshold_fraction);
      meta["localization"] = {{"proportion", loc.proportion},
                              {"iou", loc.iou},
                              {"estimated_bbox", box_to_json(loc.estimated)},
                              {"threshold_fraction", settings.threshold_fraction}};
    } catch (const Error& e) {
      meta["localization"] = {{"error", error_name(e.code())}, {"reason", e.what()}};
    }
  }

  ExplainOutcome outcome;
  outcome.out_dir = options.out_dir ? *options.out_dir : manifest.output_dir;
  std::error_code ec;
  fs::create_directories(outcome.out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + outcome.out_dir.string());

  json files;
  auto attempt = [&](const char* key, const std::string& name, auto&& write) {
    try {
      write(outcome.out_dir / name);
      files[key] = name;
    } catch (const Error& e) {
      files[key] = nullptr;
      outcome.errors.push_back(e.what());
      log(LogLevel::Error, e.what());
    }
  };
  attempt("saliency", "saliency.npy", [&](const fs::path& p) { write_tensor(raw->to_tensor(), p); });
  attempt("saliency_normalized", "saliency_normalized.npy",
          [&](const fs::path& p) { write_tensor(saliency->to_tensor(), p); });
  attempt("contributions", "contributions.npy", [&](const fs::path& p) {
    write_tensor(Tensor{{contribution_values.size()}, contribution_values, DType::F64}, p);
  });
  if (image) {
    attempt("heatmap", "heatmap.png", [&](const fs::path& p) {
      const SaliencyMap at_image =
          normalize_map(upsample_bilinear(*raw, image->shape[1], image->shape[2]));
      write_png(overlay(tensor_to_rgb(*image), at_image, 0.5), p);
    });
  } else {
    files["heatmap"] = nullptr;
  }
  meta["files"] = files;
  meta["errors"] = outcome.errors;
  outcome.metadata = meta;
  write_json(meta, outcome.out_dir / "explain.json");
  return outcome;
}

namespace {

struct EntryContext {
  const FamOptions& fam;
  const std::optional<ModelSpec>& model;
  double threshold;
};

EvalRecord evaluate_entry(const CorpusEntry& entry, const EntryContext& ctx) {
  if (entry.parse_error) throw *entry.parse_error;
  auto need_model = [&](const char* what) -> const ModelSpec& {
    if (!ctx.model) throw Error(ErrorCode::BadManifest, std::string(what) + " requires --model");
    return *ctx.model;
  };

  std::optional<Tensor> image;
  if (entry.image) image = load_image(*entry.image);
  if (!entry.features && !image) {
    throw Error(ErrorCode::BadManifest, "entry needs 'features' or 'image'");
  }
  const FeatureMap query = entry.features ? load_feature_map(*entry.features)
                                          : forward(need_model("an image-only entry"), *image);

  std::vector<Embedding> supports;
  for (const auto& p : entry.supports) supports.push_back(pool(load_feature_map(p), ctx.fam.pooling));
  for (const auto& p : entry.support_images) {
    supports.push_back(pool(forward(need_model("'support_images'"), load_image(p)), ctx.fam.pooling));
  }

  FamOptions fam = ctx.fam;
  if (image) {
    fam.out_height = image->shape[1];
    fam.out_width = image->shape[2];
  }
  const FamResult result = fam_from_embeddings(query, supports, fam);

  EvalRecord record;
  record.id = entry.id;
  record.s = result.score;
  if (entry.bbox) {
    const auto loc = evaluate_localization(result.saliency, *entry.bbox, ctx.threshold);
    record.proportion = loc.proportion;
    record.iou = loc.iou;
  }
  if (ctx.model && image) {
    const Tensor masked = mask_image(*image, result.saliency);
    const Embedding masked_query = to_decision_space(pool(forward(*ctx.model, masked), fam.pooling), fam);
    std::vector<Embedding> decision;
    decision.reserve(supports.size());
    for (const auto& s : supports) decision.push_back(to_decision_space(s, fam));
    record.s_masked = mean_similarity(masked_query, decision, fam.metric).value;
  }
  return record;
}

}  // namespace

EvalReport run_eval(const CorpusManifest& corpus, const EvalOptions& options) {
  const double threshold = options.threshold.value_or(corpus.settings.threshold_fraction);
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "--threshold must lie in (0, 1]");
  }
  const FamOptions fam = fam_options(corpus.settings, options.ignore_bias);
  std::optional<ModelSpec> model;
  if (options.model) model = load_model_spec(*options.model);
  const EntryContext ctx{fam, model, threshold};

  const auto n = static_cast<std::int64_t>(corpus.entries.size());
  std::vector<std::variant<EvalRecord, EvalFailure>> results(corpus.entries.size());

  int jobs = options.jobs;
#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_num_procs();
#else
  jobs = 1;
#endif

#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const CorpusEntry& entry = corpus.entries[static_cast<std::size_t>(i)];
    try {
      results[i] = evaluate_entry(entry, ctx);
    } catch (const Error& e) {
      results[i] = EvalFailure{entry.id, std::string(error_name(e.code())), e.what()};
    } catch (const std::exception& e) {
      results[i] = EvalFailure{entry.id, "InternalError", e.what()};
    }
  }

  EvalReport report;
  for (auto& r : results) {
    if (auto* rec = std::get_if<EvalRecord>(&r)) {
      report.images.push_back(std::move(*rec));
    } else {
      auto& failure = std::get<EvalFailure>(r);
      log(LogLevel::Warn, "skipping " + failure.id + ": " + failure.reason);
      report.failures.push_back(std::move(failure));
    }
  }
  std::stable_sort(report.images.begin(), report.images.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  std::stable_sort(report.failures.begin(), report.failures.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  report.aggregates = aggregate(report.images);
  return report;
}

json report_to_json(const EvalReport& report) {
  json images = json::array();
  for (const auto& r : report.images) {
    images.push_back({{"id", r.id},
                      {"proportion", optional_number(r.proportion)},
                      {"iou", optional_number(r.iou)},
                      {"s", optional_number(r.s)},
                      {"s_masked", optional_number(r.s_masked)}});
  }
  json failures = json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"id", f.id}, {"error", f.error}, {"reason", f.reason}});
  }
  const auto& a = report.aggregates;
  return {{"images", images},
          {"failures", failures},
          {"aggregates",
           {{"mean_proportion", optional_number(a.mean_proportion)},
            {"mean_iou", optional_number(a.mean_iou)},
            {"average_drop", optional_number(a.average_drop)},
            {"increase_in_confidence", optional_number(a.increase_in_confidence)},
            {"count", a.count},
            {"skipped_nonpositive", a.skipped_nonpositive}}}};
}

void run_cam(const CamOptions& options) {
  const FeatureMap map = load_feature_map(options.features);
  const ClassifierWeights weights = ClassifierWeights::from_tensor(read_tensor(options.weights));
  const SaliencyMap raw = cam(map, weights, options.class_index);

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + options.out_dir.string());
  write_tensor(raw.to_tensor(), options.out_dir / "cam.npy");

  if (options.image) {
    const Tensor image = load_image(*options.image);
    const SaliencyMap at_image = normalize_map(upsample_bilinear(raw, image.shape[1], image.shape[2]));
    write_png(overlay(tensor_to_rgb(image), at_image, 0.5), options.out_dir / "cam.png");
  } else {
    write_png(render_heatmap(normalize_map(raw)), options.out_dir / "cam.png");
  }
}

}  // namespace fam::cli
