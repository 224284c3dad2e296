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

#include "fam/cli/manifest.hpp"

#include <fstream>

#include <json.hpp>

namespace fam::cli {
namespace {

using nlohmann::json;

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadManifest, path.string() + ": " + e.what());
  }
}

fs::path resolve(const fs::path& base, const json& value, const char* key) {
  if (!value.is_string()) {
    throw Error(ErrorCode::BadManifest, std::string("'") + key + "' must be a path string");
  }
  const fs::path p = value.get<std::string>();
  return p.is_absolute() ? p : base / p;
}

std::optional<fs::path> optional_path(const fs::path& base, const json& node, const char* key) {
  if (!node.contains(key) || node.at(key).is_null()) return std::nullopt;
  return resolve(base, node.at(key), key);
}

std::vector<fs::path> path_list(const fs::path& base, const json& node, const char* key) {
  std::vector<fs::path> out;
  if (!node.contains(key) || node.at(key).is_null()) return out;
  if (!node.at(key).is_array()) {
    throw Error(ErrorCode::BadManifest, std::string("'") + key + "' must be an array of paths");
  }
  for (const auto& item : node.at(key)) out.push_back(resolve(base, item, key));
  return out;
}

std::optional<BoundingBox> optional_bbox(const json& node) {
  if (!node.contains("bbox") || node.at("bbox").is_null()) return std::nullopt;
  const auto& b = node.at("bbox");
  if (!b.is_array() || b.size() != 4) {
    throw Error(ErrorCode::BadManifest, "'bbox' must be [x, y, width, height]");
  }
  for (const auto& v : b) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::BadManifest, "'bbox' entries must be integers");
    }
  }
  return BoundingBox::from_xywh(b[0].get<long>(), b[1].get<long>(), b[2].get<long>(),
                                b[3].get<long>());
}

ExplainSettings parse_settings(const fs::path& base, const json& doc) {
  ExplainSettings s;
  try {
    s.metric.kind = parse_metric_kind(doc.value("metric", "cosine"));
    const PoolingKind kind = parse_pooling_kind(doc.value("pooling", "gap"));
    const double r = doc.value("lse_r", 1.0);
    s.pooling = kind == PoolingKind::LSE ? PoolingSpec::lse(r) : PoolingSpec{kind, r};
    s.contribution_mode = parse_contribution_mode(doc.value("contribution_mode", "sign_normalized"));
    s.threshold_fraction = doc.value("threshold_fraction", kDefaultThresholdFraction);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadManifest, e.what());
  }
  if (!(s.threshold_fraction > 0.0 && s.threshold_fraction <= 1.0)) {
    throw Error(ErrorCode::BadManifest, "'threshold_fraction' must lie in (0, 1]");
  }
  s.projection = optional_path(base, doc, "projection");
  s.projection_bias = optional_path(base, doc, "projection_bias");
  return s;
}

void require_exists(const std::optional<fs::path>& p) {
  if (p && !fs::exists(*p)) throw Error(ErrorCode::FileNotFound, p->string());
}

void require_exists(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) {
    if (!fs::exists(p)) throw Error(ErrorCode::FileNotFound, p.string());
  }
}

}  // namespace

ExperimentManifest load_experiment_manifest(const fs::path& path) {
  const json doc = load_json(path);
  if (!doc.is_object()) throw Error(ErrorCode::BadManifest, "manifest must be a JSON object");
  const fs::path base = path.parent_path();

  ExperimentManifest m;
  m.source = path;
  m.settings = parse_settings(base, doc);
  if (!doc.contains("query") || !doc["query"].is_object()) {
    throw Error(ErrorCode::BadManifest, "manifest lacks a 'query' object");
  }
  const json& query = doc["query"];
  m.query_features = optional_path(base, query, "features");
  m.query_image = optional_path(base, query, "image");
  m.query_bbox = optional_bbox(query);
  m.supports = path_list(base, doc, "supports");
  m.support_images = path_list(base, doc, "support_images");
  m.model = optional_path(base, doc, "model");
  m.injected_weights = optional_path(base, doc, "injected_weights");
  m.output_dir = doc.contains("output") ? resolve(base, doc["output"], "output") : base / "fam_out";

  if (doc.contains("output_size") && !doc["output_size"].is_null()) {
    const auto& sz = doc["output_size"];
    if (!sz.is_array() || sz.size() != 2 || !sz[0].is_number_unsigned() ||
        !sz[1].is_number_unsigned() || sz[0].get<std::size_t>() == 0 ||
        sz[1].get<std::size_t>() == 0) {
      throw Error(ErrorCode::BadManifest, "'output_size' must be [height, width]");
    }
    m.output_size = {sz[0].get<std::size_t>(), sz[1].get<std::size_t>()};
  }

  if (!m.query_features && !(m.query_image && m.model)) {
    throw Error(ErrorCode::BadManifest, "query needs 'features', or 'image' plus a 'model'");
  }
  if (!m.support_images.empty() && !m.model) {
    throw Error(ErrorCode::BadManifest, "'support_images' require a 'model'");
  }
  if (m.supports.empty() && m.support_images.empty() && !m.injected_weights) {
    throw Error(ErrorCode::EmptySupportSet, "manifest lists no supports");
  }

  require_exists(m.query_features);
  require_exists(m.query_image);
  require_exists(m.model);
  require_exists(m.injected_weights);
  require_exists(m.settings.projection);
  require_exists(m.settings.projection_bias);
  require_exists(m.supports);
  require_exists(m.support_images);
  return m;
}

CorpusManifest load_corpus_manifest(const fs::path& path) {
  const json doc = load_json(path);
  if (!doc.is_object()) throw Error(ErrorCode::BadManifest, "corpus must be a JSON object");
  const fs::path base = path.parent_path();

  CorpusManifest corpus;
  corpus.source = path;
  corpus.settings = parse_settings(base, doc);
  require_exists(corpus.settings.projection);
  require_exists(corpus.settings.projection_bias);
  if (!doc.contains("images") || !doc["images"].is_array()) {
    throw Error(ErrorCode::BadManifest, "corpus lacks an 'images' array");
  }

  std::size_t index = 0;
  for (const auto& node : doc["images"]) {
    CorpusEntry entry;
    entry.id = "#" + std::to_string(index++);
    try {
      if (!node.is_object()) throw Error(ErrorCode::BadManifest, "entry must be an object");
      if (node.contains("id")) {
        const auto& id = node["id"];
        entry.id = id.is_string() ? id.get<std::string>() : id.dump();
      }
      entry.features = optional_path(base, node, "features");
      entry.image = optional_path(base, node, "image");
      entry.bbox = optional_bbox(node);
      entry.supports = path_list(base, node, "supports");
      entry.support_images = path_list(base, node, "support_images");
    } catch (const Error& e) {
      entry.parse_error = e;
    } catch (const json::exception& e) {
      entry.parse_error = Error(ErrorCode::BadManifest, e.what());
    }
    corpus.entries.push_back(std::move(entry));
  }
  return corpus;
}

}  // namespace fam::cli
