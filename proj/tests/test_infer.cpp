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

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "sealread/baseline.hpp"
#include "sealread/error.hpp"
#include "sealread/infer.hpp"
#include "sealread/metrics.hpp"
#include "sealread/synthseal.hpp"

using namespace sealread;

namespace {

SealSpec spec_with(std::vector<std::vector<std::string>> text) {
  SealSpec s;
  s.text = std::move(text);
  s.noise_sigma = 2.0;
  return s;
}

struct Trained {
  std::vector<GeneratedSeal> seals;
  TemplateSet templates;
};

const Trained& trained() {
  static const Trained t = [] {
    Trained t;
    const std::vector<std::vector<std::vector<std::string>>> texts{
        {{"ALPHA", "BETA", "GAMMA", "DELTA"}, {"EPSILON", "ETA", "THETA", "IOTA"}, {"KAPPA", "LAMBDA", "MU"}},
        {{"NU", "OMICRON", "PI", "RHO"}, {"SIGMA", "TAU", "UPSILON", "PHI"}, {"CHI", "OMEGA", "ALPHA"}},
        {{"MU", "IOTA", "ALPHA", "NU"}, {"OMEGA", "ETA", "SIGMA", "TAU"}, {"PI", "RHO", "EPSILON"}}};
    for (std::size_t i = 0; i < texts.size(); ++i) t.seals.push_back(generate_seal(spec_with(texts[i]), 100 + i));
    std::vector<TrainingSeal> train;
    for (const auto& s : t.seals) train.push_back({&s.annotation, &s.image});
    std::vector<std::string> subset{"ALPHA", "BETA",    "GAMMA", "DELTA", "EPSILON", "ETA",     "THETA",
                                    "IOTA",  "KAPPA",   "LAMBDA", "MU",   "NU",      "OMICRON", "PI",
                                    "RHO",   "SIGMA",   "TAU",   "UPSILON", "PHI",   "CHI",     "OMEGA",
                                    std::string(kNonCharacter)};
    t.templates = build_templates(train, subset, 0.15, 64);
    return t;
  }();
  return t;
}

}  // namespace

TEST_CASE("nms") {
  const BBox a{0.3, 0.5, 0.2, 0.2};
  SUBCASE("disjoint boxes survive") {
    std::vector<Detection> d{{{0.1, 0.1, 0.1, 0.1}, 0.5}, {{0.8, 0.8, 0.1, 0.1}, 0.6}};
    const auto k = nms(d, 0.3);
    CHECK(k.size() == 2);
    CHECK(k[0].confidence == 0.6);
  }
  SUBCASE("identical boxes") {
    std::vector<Detection> d{{a, 0.8}, {a, 0.9}};
    const auto k = nms(d, 0.5);
    REQUIRE(k.size() == 1);
    CHECK(k[0].confidence == 0.9);
  }
  SUBCASE("chain") {
    const BBox b{0.4, 0.5, 0.2, 0.2}, c{0.5, 0.5, 0.2, 0.2};
    REQUIRE(iou(a, b) > 0.3);
    REQUIRE(iou(b, c) > 0.3);
    REQUIRE(iou(a, c) == 0.0);
    std::vector<Detection> d{{c, 0.7}, {a, 0.9}, {b, 0.8}};
    const auto k = nms(d, 0.3);
    REQUIRE(k.size() == 2);
    CHECK(k[0].bbox == a);
    CHECK(k[1].bbox == c);
  }
}

TEST_CASE("class scores validation") {
  ClassScores s{{0.5, 0.5}};
  CHECK_NOTHROW(s.validate(2));
  CHECK_THROWS_AS(s.validate(3), BackendError);
  CHECK_THROWS_AS((ClassScores{{0.5, 0.6}}.validate(2)), BackendError);
  CHECK_THROWS_AS((ClassScores{{1.5, -0.5}}.validate(2)), BackendError);
  CHECK((ClassScores{{0.4, 0.4, 0.2}}.argmax()) == 0);
}

TEST_CASE("baseline detects every glyph of a clean seal") {
  const auto& t = trained();
  const auto probe = generate_seal(
      spec_with({{"OMEGA", "ALPHA", "MU"}, {"ETA", "PI", "SIGMA", "NU"}, {"RHO", "IOTA", "TAU"}}), 7);
  BaselineDetector det(t.templates);
  const auto d = detect(det, probe.image, t.templates.params.nms_threshold);
  std::vector<BBox> gts;
  for (const auto& c : probe.annotation.chars) gts.push_back(c.bbox);
  const auto m = match_detections(d, gts, 0.5);
  CHECK(m.unmatched_gts.empty());
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i - 1].confidence >= d[i].confidence);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) CHECK(iou(d[i].bbox, d[j].bbox) <= 0.45);
  CHECK(baseline_detect(probe.image, t.templates, 1.01, 0.45).empty());
  CHECK(detect(det, probe.image, 0.45) == detect(det, probe.image, 0.45));
}

TEST_CASE("baseline detects one pasted template at its position") {
  const auto& t = trained();
  const auto* tpl = t.templates.find("OMEGA");
  REQUIRE(tpl);
  const int f = t.templates.downsample;
  Image canvas(200, 200, 150.0f);
  // paste the mean relief of an OMEGA crop from a training render
  const auto& src = t.seals[1];
  std::size_t k = 0;
  while (src.annotation.chars[k].class_name != "OMEGA") ++k;
  const auto r = to_pixels(src.annotation.chars[k].bbox, src.image.width(), src.image.height());
  const int m = 6;
  const int x0 = static_cast<int>(r.x0) - m, y0 = static_cast<int>(r.y0) - m;
  const int w = static_cast<int>(r.width()) + 2 * m, h = static_cast<int>(r.height()) + 2 * m;
  const int px = 80, py = 70;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) canvas.at(px + x, py + y) = src.image.at(x0 + x, y0 + y);
  const auto d = baseline_detect(canvas, t.templates, t.templates.params.score_floor, 0.45);
  REQUIRE(d.size() == 1);
  const double want_cx = px + m + (r.x0 - static_cast<int>(r.x0)) + r.width() / 2;
  const double want_cy = py + m + (r.y0 - static_cast<int>(r.y0)) + r.height() / 2;
  CHECK(std::abs(d[0].bbox.cx * 200 - want_cx) <= 2.0 * f);
  CHECK(std::abs(d[0].bbox.cy * 200 - want_cy) <= 2.0 * f);
}

TEST_CASE("two close copies collapse under nms") {
  const auto& t = trained();
  const auto* tpl = t.templates.find("OMICRON");
  REQUIRE(tpl);
  const BBox a{0.5, 0.5, 0.1, 0.12}, b{0.5 + 5.0 / 200, 0.5, 0.1, 0.12};
  CHECK(iou(a, b) > 0.3);
  std::vector<Detection> d{{a, 0.9}, {b, 0.85}};
  CHECK(nms(d, 0.3).size() == 1);
}

TEST_CASE("baseline classifier") {
  const auto& t = trained();
  BaselineClassifier cls(t.templates);
  SUBCASE("its own templates classify as themselves") {
    for (const auto& tpl : t.templates.templates) {
      const auto s = classify(cls, tpl.classify_patch, t.templates.params.feature_size);
      CHECK(cls.classes()[s.argmax()] == tpl.class_name);
      CHECK(std::accumulate(s.scores.begin(), s.scores.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("blank crop is a non-character") {
    const auto s = classify(cls, Image(64, 64, 150.0f), 64);
    CHECK(cls.classes()[s.argmax()] == kNonCharacter);
  }
  SUBCASE("crop size is checked") {
    CHECK_THROWS_AS(classify(cls, Image(10, 10, 1.0f), 64), ValidationError);
  }
}

TEST_CASE("oracle backends") {
  const auto& s = trained().seals[0];
  const InferenceContext ctx{&s.annotation};
  OracleDetector det;
  const auto d = detect(det, s.image, 0.45, ctx);
  CHECK(d.size() == s.annotation.chars.size());
  OracleClassifier cls({"ALPHA", "BETA", std::string(kNonCharacter)});
  const auto sc = cls.classify(Image(4, 4), s.annotation.chars[0].bbox, ctx);
  CHECK(sc.scores == std::vector<double>{1, 0, 0});
  const auto miss = cls.classify(Image(4, 4), BBox{0.02, 0.02, 0.01, 0.01}, ctx);
  CHECK(miss.argmax() == 2);
  CHECK_THROWS_AS(det.detect(s.image, {}), BackendError);
}

TEST_CASE("template set json round trip") {
  const auto& t = trained().templates;
  const auto back = TemplateSet::from_json(t.to_json());
  CHECK(back.classes == t.classes);
  REQUIRE(back.templates.size() == t.templates.size());
  CHECK(back.templates[3].detect_patch == t.templates[3].detect_patch);
  CHECK(back.downsample == t.downsample);
}
