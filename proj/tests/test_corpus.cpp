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

#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sealread/corpus.hpp"
#include "sealread/error.hpp"
#include "sealread/synthseal.hpp"

using namespace sealread;
namespace fs = std::filesystem;

namespace {

SealAnnotation two_char_seal(const std::string& id) {
  SealAnnotation s;
  s.seal_id = id;
  s.collection = "test";
  s.image_path = id + ".png";
  s.image_w = s.image_h = 100;
  s.chars = {{{0.3, 0.5, 0.1, 0.2}, "ALPHA", 0, std::nullopt},
             {{0.6, 0.5, 0.1, 0.2}, "OMEGA", 0, std::nullopt}};
  s.transcription_gt = TextLines{{"ALPHA", "OMEGA"}};
  return s;
}

CorpusManifest n_seals(int n, Side side = Side::reverse) {
  CorpusManifest m;
  m.registry_version = default_registry().version();
  for (int i = 0; i < n; ++i) {
    auto s = two_char_seal("s" + std::to_string(100 + i));
    s.side = side;
    m.seals.push_back(s);
  }
  return m;
}

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("sealread_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("manifest round trip") {
  const auto m = n_seals(2);
  const auto dir = temp_dir("manifest");
  save_manifest(m, dir / "manifest.json");
  const auto back = load_manifest(dir / "manifest.json");
  CHECK(back.seals == m.seals);
  CHECK(to_json(back) == to_json(m));
}

TEST_CASE("manifest validation errors name the seal and field") {
  auto m = n_seals(2);
  SUBCASE("unknown class") {
    m.seals[1].chars[1].class_name = "OMEGA_TYPO";
    m.seals[1].transcription_gt.reset();
    try {
      manifest_from_json(to_json(m));
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("s101") != std::string::npos);
      CHECK(msg.find("chars[1]") != std::string::npos);
    }
  }
  SUBCASE("transcription misses a character") {
    m.seals[0].transcription_gt = TextLines{{"ALPHA"}};
    CHECK_THROWS_AS(manifest_from_json(to_json(m)), ValidationError);
  }
  SUBCASE("duplicate seal id") {
    m.seals[1].seal_id = m.seals[0].seal_id;
    CHECK_THROWS_AS(manifest_from_json(to_json(m)), ValidationError);
  }
  SUBCASE("bad box") {
    m.seals[0].chars[0].bbox.w = 0;
    CHECK_THROWS_AS(manifest_from_json(to_json(m)), ValidationError);
  }
}

TEST_CASE("folds") {
  SUBCASE("66 seals into 10") {
    const auto plan = make_folds(n_seals(66), 10, 1);
    std::multiset<std::size_t> sizes;
    std::set<std::string> all;
    for (const auto& f : plan.folds) {
      sizes.insert(f.size());
      all.insert(f.begin(), f.end());
    }
    CHECK(sizes.count(7) == 6);
    CHECK(sizes.count(6) == 4);
    CHECK(all.size() == 66);
    CHECK(make_folds(n_seals(66), 10, 1) == plan);
  }
  SUBCASE("singletons") {
    const auto plan = make_folds(n_seals(10), 10, 9);
    for (const auto& f : plan.folds) CHECK(f.size() == 1);
  }
  SUBCASE("manifest order does not matter") {
    auto m = n_seals(12);
    auto r = m;
    std::reverse(r.seals.begin(), r.seals.end());
    CHECK(make_folds(m, 3, 5) == make_folds(r, 3, 5));
  }
  SUBCASE("too few seals") { CHECK_THROWS_AS(make_folds(n_seals(3), 4, 1), ValidationError); }
  SUBCASE("side filter") {
    auto m = n_seals(6);
    auto ob = n_seals(3, Side::obverse);
    for (auto& s : ob.seals) s.seal_id = "ob" + s.seal_id;
    m.seals.insert(m.seals.end(), ob.seals.begin(), ob.seals.end());
    const auto plan = make_folds(m, 2, 1, Side::reverse);
    std::size_t n = 0;
    for (const auto& f : plan.folds) n += f.size();
    CHECK(n == 6);
  }
}

TEST_CASE("fold split partitions and guards augmentation") {
  auto m = n_seals(10);
  const auto plan = make_folds(m, 5, 3);
  for (int f = 0; f < 5; ++f) {
    const auto split = fold_split(plan, f, m);
    std::set<std::string> train, test;
    for (auto* s : split.train) train.insert(s->seal_id);
    for (auto* s : split.test) test.insert(s->seal_id);
    CHECK(train.size() + test.size() == 10);
    for (const auto& id : test) CHECK(train.count(id) == 0);
    CHECK(split.train.size() == 8);
  }
  const std::vector<std::string> collide{plan.folds[0][0]};
  CHECK_THROWS_AS(fold_split(plan, 0, m, collide), LeakageError);
  CHECK_THROWS_AS(fold_split(plan, 5, m), ValidationError);
}

TEST_CASE("fold plan json") {
  const auto plan = make_folds(n_seals(6), 3, 8);
  CHECK(fold_plan_from_json(to_json(plan)) == plan);
}

TEST_CASE("crops") {
  Image img(100, 100, 0.0f);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x) img.at(x, y) = static_cast<float>(x + 100 * y);
  SUBCASE("padding arithmetic") {
    // centered 100 px box on a 400 px canvas, pad 0.25 -> 150 px region
    const auto r = padded_region({0.5, 0.5, 0.25, 0.25}, 400, 400, 0.25);
    CHECK(r.width() == doctest::Approx(150));
    CHECK(r.height() == doctest::Approx(150));
  }
  SUBCASE("zero pad at the image edge") {
    const BBox b{0.1, 0.1, 0.2, 0.2};
    const auto r = padded_region(b, 100, 100, 0.0);
    CHECK(r.x0 == doctest::Approx(0));
    CHECK(r.x1 == doctest::Approx(20));
    const auto c = crop_box(img, b, 0.0, 20);
    REQUIRE(c);
    for (int y = 0; y < 20; ++y)
      for (int x = 0; x < 20; ++x) CHECK(c->at(x, y) == doctest::Approx(img.at(x, y)));
  }
  SUBCASE("one crop per char at the requested size") {
    auto s = two_char_seal("c");
    const auto set = extract_crops(s, img, 0.1, 256);
    CHECK(set.crops.size() == 2);
    for (const auto& c : set.crops) {
      CHECK(c.image.width() == 256);
      CHECK(c.image.height() == 256);
    }
    CHECK(set.crops[1].class_name == "OMEGA");
  }
}

TEST_CASE("non-character sampling") {
  const auto g = generate_seal([] {
    SealSpec s;
    s.text = {{"ALPHA", "BETA", "GAMMA"}, {"DELTA", "EPSILON"}, {"ZETA", "ETA", "THETA", "IOTA"}};
    return s;
  }(), 4);
  const auto& seal = g.annotation;
  double mw = 0, mh = 0;
  for (const auto& c : seal.chars) mw += c.bbox.w, mh += c.bbox.h;
  mw /= seal.chars.size();
  mh /= seal.chars.size();
  const auto sample = sample_noncharacters(seal, 150, 77);
  CHECK(sample.boxes.size() == 150);
  CHECK(!sample.warning);
  for (const auto& b : sample.boxes) {
    CHECK(b.class_name == kNonCharacter);
    CHECK(b.bbox.w == doctest::Approx(mw));
    CHECK(b.bbox.h == doctest::Approx(mh));
    for (const auto& c : seal.chars) CHECK(oracle::iou(b.bbox, c.bbox) < 0.10);
  }
  CHECK(sample_noncharacters(seal, 150, 77).boxes == sample.boxes);
  CHECK(sample_noncharacters(seal, 0, 77).boxes.empty());
  CHECK(sample_noncharacters(seal, 10, 78).boxes != sample_noncharacters(seal, 10, 77).boxes);
}

TEST_CASE("non-character sampling that cannot succeed returns fewer with a warning") {
  SealAnnotation s;
  s.seal_id = "full";
  s.image_w = s.image_h = 10;
  // one box covering the whole disc
  s.chars = {{{0.5, 0.5, 1.0, 1.0}, "ALPHA", std::nullopt, std::nullopt}};
  const auto r = sample_noncharacters(s, 3, 1);
  CHECK(r.boxes.empty());
  CHECK(r.warning);
}
