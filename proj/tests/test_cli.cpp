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

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>

#include "fam/cam.hpp"
#include "fam/cli/commands.hpp"
#include "fam/cli/manifest.hpp"
#include "fam/npy.hpp"
#include "fam/pooling.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fam;
using nlohmann::json;

namespace {

struct ToolRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

ToolRun run_tool(const std::string& args, const std::filesystem::path& scratch) {
  const auto out = scratch / "stdout.txt";
  const auto err = scratch / "stderr.txt";
  const std::string cmd = std::string("'") + FAM_TOOL_PATH + "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  ToolRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = test::slurp(out);
  r.err = test::slurp(err);
  return r;
}

// 1 x h x w indicator of `box` as both feature map and image.
Tensor indicator(std::size_t h, std::size_t w, const BoundingBox& box) {
  Tensor t{{1, h, w}, std::vector<double>(h * w, 0.0)};
  for (long y = box.y0; y < box.y1; ++y)
    for (long x = box.x0; x < box.x1; ++x) t.values[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)] = 1.0;
  return t;
}

std::filesystem::path identity_model(const std::filesystem::path& dir) {
  write_tensor(Tensor{{1, 1, 1, }, {1.0}}, dir / "one.npy");
  test::write_json_file({{"layers", {{{"type", "conv"}, {"in_channels", 1}, {"out_channels", 1}, {"kernel", 1},
                                      {"weights", "one.npy"}}}}},
                        dir / "identity.json");
  return dir / "identity.json";
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("explain with the query as its own support scores 1") {
    test::TempDir dir;
    oracle::Rng rng(1);
    write_tensor(Tensor{{4, 3, 3}, rng.normals(36)}, dir.path() / "q.npy");
    test::write_json_file({{"query", {{"features", "q.npy"}}}, {"supports", {"q.npy"}}, {"output_size", {6, 6}}},
                          dir.path() / "m.json");
    const auto outcome = cli::run_explain(cli::load_experiment_manifest(dir.path() / "m.json"), {});
    CHECK(outcome.errors.empty());
    CHECK(std::abs(outcome.metadata["score"].get<double>() - 1.0) <= 1e-9);
    CHECK(outcome.out_dir == dir.path() / "fam_out");
    CHECK(read_tensor(outcome.out_dir / "saliency.npy").shape == std::vector<std::size_t>{3, 3});
    CHECK(read_tensor(outcome.out_dir / "saliency_normalized.npy").shape == std::vector<std::size_t>{6, 6});
    CHECK(read_tensor(outcome.out_dir / "contributions.npy").shape == std::vector<std::size_t>{4});
    CHECK(test::read_json_file(outcome.out_dir / "explain.json") == outcome.metadata);
  }

  TEST_CASE("missing support file exits 2 with FileNotFound") {
    test::TempDir dir;
    write_tensor(Tensor{{2, 2, 2}, std::vector<double>(8, 1.0)}, dir.path() / "q.npy");
    test::write_json_file({{"query", {{"features", "q.npy"}}}, {"supports", {"gone.npy"}}}, dir.path() / "m.json");
    const ToolRun r = run_tool("explain --manifest '" + (dir.path() / "m.json").string() + "'", dir.path());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("FileNotFound") != std::string::npos);
  }

  TEST_CASE("seeded model explain is byte-identical across runs") {
    test::TempDir dir;
    test::write_seeded_model(dir.path());
    write_tensor(test::seeded_image(11), dir.path() / "img.npy");
    write_tensor(test::seeded_image(12), dir.path() / "s1.npy");
    test::write_json_file({{"query", {{"image", "img.npy"}, {"bbox", {2, 2, 8, 8}}}},
                           {"support_images", {"s1.npy"}},
                           {"model", "model.json"}},
                          dir.path() / "m.json");
    const auto m = (dir.path() / "m.json").string();
    const auto a = dir.path() / "a", b = dir.path() / "b";
    REQUIRE(run_tool("explain --manifest '" + m + "' --out '" + a.string() + "'", dir.path()).exit_code == 0);
    REQUIRE(run_tool("explain --manifest '" + m + "' --out '" + b.string() + "'", dir.path()).exit_code == 0);
    for (const char* f : {"saliency.npy", "saliency_normalized.npy", "contributions.npy", "heatmap.png", "explain.json"}) {
      CHECK_MESSAGE(test::slurp(a / f) == test::slurp(b / f), f);
    }
    const json meta = test::read_json_file(a / "explain.json");
    CHECK(meta["output_size"] == json{16, 16});
    CHECK(meta["localization"].contains("iou"));
  }

  TEST_CASE("eval: perfect localization and unchanged masked scores") {
    test::TempDir dir;
    const BoundingBox box{2, 1, 6, 4};
    write_tensor(indicator(6, 8, box), dir.path() / "img.npy");
    identity_model(dir.path());
    test::write_json_file({{"images",
                            {{{"id", "only"}, {"image", "img.npy"}, {"bbox", {2, 1, 4, 3}}, {"support_images", {"img.npy"}}}}}},
                          dir.path() / "corpus.json");
    cli::EvalOptions opt;
    opt.model = dir.path() / "identity.json";
    opt.jobs = 2;
    const EvalReport report = cli::run_eval(cli::load_corpus_manifest(dir.path() / "corpus.json"), opt);
    REQUIRE(report.images.size() == 1);
    CHECK(report.failures.empty());
    CHECK(*report.aggregates.mean_iou == 1.0);
    CHECK(*report.aggregates.mean_proportion == 1.0);
    CHECK(*report.images[0].s_masked == *report.images[0].s);
    CHECK(*report.aggregates.average_drop == 0.0);
    CHECK(*report.aggregates.increase_in_confidence == 0.0);
  }

  TEST_CASE("eval: aggregates over two images equal the per-image means") {
    test::TempDir dir;
    oracle::Rng rng(2);
    write_tensor(Tensor{{3, 8, 8}, rng.normals(192)}, dir.path() / "a.npy");
    write_tensor(Tensor{{3, 8, 8}, rng.normals(192)}, dir.path() / "b.npy");
    write_tensor(Tensor{{3, 8, 8}, rng.normals(192)}, dir.path() / "s.npy");
    test::write_json_file({{"images",
                            {{{"id", "b"}, {"features", "b.npy"}, {"bbox", {0, 0, 4, 4}}, {"supports", {"s.npy"}}},
                             {{"id", "a"}, {"features", "a.npy"}, {"bbox", {2, 3, 5, 2}}, {"supports", {"s.npy", "b.npy"}}}}}},
                          dir.path() / "corpus.json");
    const EvalReport report = cli::run_eval(cli::load_corpus_manifest(dir.path() / "corpus.json"), {});
    REQUIRE(report.images.size() == 2);
    CHECK(report.images[0].id == "a");
    const double p = (*report.images[0].proportion + *report.images[1].proportion) / 2;
    const double i = (*report.images[0].iou + *report.images[1].iou) / 2;
    CHECK(*report.aggregates.mean_proportion == doctest::Approx(p).epsilon(1e-15));
    CHECK(*report.aggregates.mean_iou == doctest::Approx(i).epsilon(1e-15));
    CHECK_FALSE(report.aggregates.average_drop.has_value());

    const json doc = cli::report_to_json(report);
    CHECK(doc["aggregates"]["count"] == 2);
    CHECK(doc["images"][1]["s_masked"].is_null());
  }

  TEST_CASE("eval isolates failing entries and exits 1 only when nothing succeeds") {
    test::TempDir dir;
    write_tensor(Tensor{{2, 4, 4}, std::vector<double>(32, 1.0)}, dir.path() / "ok.npy");
    test::write_json_file({{"images",
                            {{{"id", "good"}, {"features", "ok.npy"}, {"supports", {"ok.npy"}}},
                             {{"id", "bad"}, {"features", "missing.npy"}, {"supports", {"ok.npy"}}},
                             {{"id", "worse"}, {"bbox", "nope"}}}}},
                          dir.path() / "corpus.json");
    const EvalReport report = cli::run_eval(cli::load_corpus_manifest(dir.path() / "corpus.json"), {});
    CHECK(report.images.size() == 1);
    REQUIRE(report.failures.size() == 2);
    CHECK(report.failures[0].id == "bad");
    CHECK(report.failures[0].error == "FileNotFound");
    CHECK(report.failures[1].error == "BadManifest");

    test::write_json_file({{"images", {{{"id", "bad"}, {"features", "missing.npy"}, {"supports", {"ok.npy"}}}}}},
                          dir.path() / "all_bad.json");
    const ToolRun r = run_tool("eval --corpus '" + (dir.path() / "all_bad.json").string() + "'", dir.path());
    CHECK(r.exit_code == 1);
    CHECK(json::parse(r.out)["failures"].size() == 1);
  }

  TEST_CASE("cam with a bad class index exits 2") {
    test::TempDir dir;
    write_tensor(Tensor{{2, 2, 2}, std::vector<double>(8, 1.0)}, dir.path() / "f.npy");
    write_tensor(Tensor{{2, 2}, {1, 0, 0, 1}}, dir.path() / "w.npy");
    const std::string base = "cam --features '" + (dir.path() / "f.npy").string() + "' --weights '" +
                             (dir.path() / "w.npy").string() + "' --out '" + (dir.path() / "o").string() + "'";
    const ToolRun bad = run_tool(base + " --class 5", dir.path());
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("BadClassIndex") != std::string::npos);
    CHECK(run_tool(base + " --class 1", dir.path()).exit_code == 0);
    CHECK(read_tensor(dir.path() / "o" / "cam.npy").values == std::vector<double>(4, 1.0));
    CHECK(test::slurp(dir.path() / "o" / "cam.png").substr(1, 3) == "PNG");
  }

  TEST_CASE("cam and explain with injected weights write the same map") {
    test::TempDir dir;
    oracle::Rng rng(3);
    write_tensor(Tensor{{5, 4, 6}, rng.normals(120)}, dir.path() / "f.npy");
    const auto row = rng.normals(5);
    write_tensor(Tensor{{5}, row}, dir.path() / "c.npy");
    write_tensor(Tensor{{1, 5}, row}, dir.path() / "w.npy");
    test::write_json_file({{"query", {{"features", "f.npy"}}}, {"supports", {"f.npy"}}, {"injected_weights", "c.npy"}},
                          dir.path() / "m.json");
    cli::run_explain(cli::load_experiment_manifest(dir.path() / "m.json"), {dir.path() / "e", false});
    cli::run_cam({dir.path() / "f.npy", dir.path() / "w.npy", 0, dir.path() / "c", std::nullopt});
    const auto a = read_tensor(dir.path() / "e" / "saliency.npy").values;
    const auto b = read_tensor(dir.path() / "c" / "cam.npy").values;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  }

  TEST_CASE("projection bias needs --ignore-bias") {
    test::TempDir dir;
    oracle::Rng rng(4);
    write_tensor(Tensor{{3, 2, 2}, rng.normals(12)}, dir.path() / "q.npy");
    write_tensor(Tensor{{3, 2}, rng.normals(6)}, dir.path() / "W.npy");
    write_tensor(Tensor{{2}, {0.1, 0.2}}, dir.path() / "b.npy");
    test::write_json_file({{"query", {{"features", "q.npy"}}}, {"supports", {"q.npy"}},
                           {"projection", "W.npy"}, {"projection_bias", "b.npy"}},
                          dir.path() / "m.json");
    const std::string m = "'" + (dir.path() / "m.json").string() + "'";
    const ToolRun refused = run_tool("explain --manifest " + m, dir.path());
    CHECK(refused.exit_code == 2);
    CHECK(refused.err.find("BiasUnsupported") != std::string::npos);
    CHECK(run_tool("explain --ignore-bias --manifest " + m, dir.path()).exit_code == 0);
  }

  TEST_CASE("manifest validation") {
    test::TempDir dir;
    write_tensor(Tensor{{1, 1, 1}, {1.0}}, dir.path() / "q.npy");
    test::write_json_file({{"query", {{"features", "q.npy"}}}}, dir.path() / "nosup.json");
    CHECK(test::error_code_of([&] { cli::load_experiment_manifest(dir.path() / "nosup.json"); }) ==
          ErrorCode::EmptySupportSet);
    test::write_json_file({{"query", {{"image", "q.npy"}}}, {"supports", {"q.npy"}}}, dir.path() / "nomodel.json");
    CHECK(test::error_code_of([&] { cli::load_experiment_manifest(dir.path() / "nomodel.json"); }) ==
          ErrorCode::BadManifest);
    test::write_json_file({{"query", {{"features", "q.npy"}}}, {"supports", {"q.npy"}}, {"metric", "l1"}},
                          dir.path() / "metric.json");
    CHECK(test::error_code_of([&] { cli::load_experiment_manifest(dir.path() / "metric.json"); }) ==
          ErrorCode::BadManifest);
  }

  TEST_CASE("usage errors exit 2") {
    test::TempDir dir;
    CHECK(run_tool("", dir.path()).exit_code == 2);
    CHECK(run_tool("explain", dir.path()).exit_code == 2);
  }
}
