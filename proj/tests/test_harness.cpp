// Copyright 2026 The sealread Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sealread/error.hpp"
#include "sealread/harness.hpp"
#include "sealread/rng.hpp"
#include "sealread/synthseal.hpp"

using namespace sealread;

namespace {

const GeneratedCorpus& small_corpus() {
  static const GeneratedCorpus c = generate_corpus(CorpusConfig{}, 12, 77);
  return c;
}

RunConfig oracle_config() {
  RunConfig cfg;
  cfg.k = 3;
  cfg.detector = Backend::oracle;
  cfg.classifier = Backend::oracle;
  cfg.min_samples = 1;
  cfg.noncharacters = 30;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("oracle backends close the loop") {
  const auto& c = small_corpus();
  const auto r = cross_validate(c.manifest, memory_loader(c.manifest, c.images), oracle_config());
  REQUIRE(r.folds.size() == 3);
  for (const auto& f : r.folds) {
    CHECK(f.detection.precision == 1.0);
    CHECK(f.detection.recall == 1.0);
    CHECK(f.detection.map50 == doctest::Approx(1.0));
    CHECK(f.cer == 0.0);
    CHECK(f.classification.top1 == 1.0);
    CHECK(f.failed == 0);
  }
  CHECK(r.overall.cer == 0.0);
}

TEST_CASE("null backends find nothing") {
  const auto& c = small_corpus();
  auto cfg = oracle_config();
  cfg.detector = Backend::null;
  cfg.classifier = Backend::null;
  const auto r = cross_validate(c.manifest, memory_loader(c.manifest, c.images), cfg);
  for (const auto& f : r.folds) {
    CHECK(f.detection.recall == 0.0);
    CHECK(f.cer == 1.0);
  }
}

TEST_CASE("reports are deterministic and independent of manifest order") {
  const auto& c = small_corpus();
  const auto cfg = oracle_config();
  const auto a = to_json(cross_validate(c.manifest, memory_loader(c.manifest, c.images), cfg)).dump();
  const auto b = to_json(cross_validate(c.manifest, memory_loader(c.manifest, c.images), cfg)).dump();
  CHECK(a == b);

  CorpusManifest shuffled = c.manifest;
  std::vector<Image> images = c.images;
  std::vector<std::size_t> order(shuffled.seals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(5);
  shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled.seals[i] = c.manifest.seals[order[i]];
    images[i] = c.images[order[i]];
  }
  const auto s = to_json(cross_validate(shuffled, memory_loader(shuffled, images), cfg)).dump();
  CHECK(s == a);
}

TEST_CASE("leakage guard") {
  const auto& c = small_corpus();
  const auto cfg = oracle_config();
  const auto classes = active_classes(c.manifest, cfg);
  auto plan = make_folds(c.manifest, 3, cfg.seed, Side::reverse);
  const auto loader = memory_loader(c.manifest, c.images);
  CHECK_NOTHROW(run_fold(c.manifest, loader, plan, 0, cfg, classes));
  plan.folds[1].push_back(plan.folds[0].front());
  CHECK_THROWS_AS(run_fold(c.manifest, loader, plan, 0, cfg, classes), LeakageError);
  const std::vector<std::string> train{"a", "b"}, test{"c", "a"};
  CHECK_THROWS_AS(assert_disjoint(train, test), LeakageError);
}

TEST_CASE("row formatting") {
  CHECK(format_detection_row({0.9374, 0.8980, 0.9440, 0.6578}) == "93.74 | 89.80 | 94.40 | 65.78");
  CHECK(format_classification_row(0.9212, 0.9610, 0.9737, 0.9165) == "92.12 | 96.10 | 97.37 | 91.65");
  const std::vector<double> cers{0.1, 0.2, 0.3};
  CHECK(format_cer_row(cers) == "0.10 | 0.20 | 0.30 | 0.20");
}

TEST_CASE("emit_report writes every artifact") {
  const auto& c = small_corpus();
  const auto r = cross_validate(c.manifest, memory_loader(c.manifest, c.images), oracle_config());
  const auto dir = std::filesystem::temp_directory_path() / "sealread_test_report";
  std::filesystem::remove_all(dir);
  const auto files = emit_report(r, dir);
  CHECK(files.size() == 4 + 2 * r.folds.size());
  const auto csv = slurp(dir / "per_seal_cer.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 12);
  CHECK(csv.rfind("fold,seal_id,cer,status", 0) == 0);
  CHECK(slurp(dir / "tables.md").find("| Overall |") != std::string::npos);

  const auto back = cv_report_from_json(nlohmann::json::parse(slurp(dir / "report.json")));
  CHECK(to_json(back).dump() == to_json(r).dump());

  CVReport empty = r;
  empty.folds.clear();
  CHECK_THROWS_AS(emit_report(empty, dir), ValidationError);
}

TEST_CASE("config precedence and validation") {
  RunConfig defaults;
  const auto j = nlohmann::json{{"k", 5}, {"hough", {{"rho_step", 0.25}}}};
  const auto cfg = run_config_from_json(j, defaults);
  CHECK(cfg.k == 5);
  CHECK(cfg.hough.rho_step == 0.25);
  CHECK(cfg.hough.theta_range_deg == defaults.hough.theta_range_deg);
  CHECK(cfg.seed == 42);
  CHECK(run_config_from_json(to_json(cfg)).k == 5);
  CHECK_THROWS_AS(run_config_from_json({{"kk", 5}}), ValidationError);
  CHECK_THROWS_AS(run_config_from_json({{"k", 1}}), ValidationError);
  CHECK_THROWS_AS(backend_from_string("gpu"), ValidationError);

  RunConfig ext;
  ext.detector = Backend::external;
  CHECK_THROWS_AS(ext.validate(), ValidationError);
}

TEST_CASE("failed seals are counted, not fatal") {
  const auto& c = small_corpus();
  auto cfg = oracle_config();
  cfg.detector = Backend::external;
  cfg.detector_command = "exit 0";
  cfg.timeout_s = 2;
  const auto r = cross_validate(c.manifest, memory_loader(c.manifest, c.images), cfg);
  CHECK(r.overall.failed == 12);
  for (const auto& f : r.folds)
    for (const auto& s : f.seals) CHECK(s.failed);
}
