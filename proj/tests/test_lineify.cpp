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
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "sealread/alphabet.hpp"
#include "sealread/error.hpp"
#include "sealread/lineify.hpp"
#include "sealread/synthseal.hpp"

using namespace sealread;

namespace {

std::set<std::set<std::size_t>> partition(const std::vector<TextLine>& lines) {
  std::set<std::set<std::size_t>> out;
  for (const auto& l : lines) out.insert({l.member_indices.begin(), l.member_indices.end()});
  return out;
}

std::set<std::set<std::size_t>> truth(const fixture::RowFixture& f) {
  std::map<int, std::set<std::size_t>> rows;
  for (std::size_t i = 0; i < f.row.size(); ++i) rows[f.row[i]].insert(i);
  std::set<std::set<std::size_t>> out;
  for (auto& [r, s] : rows) out.insert(s);
  return out;
}

}  // namespace

TEST_CASE("collinear centers form one ordered line") {
  std::vector<BBox> boxes;
  for (int i : {3, 0, 4, 1, 2}) boxes.push_back({0.2 + 0.1 * i, 0.5, 0.08, 0.1});
  const auto lines = reading_order(extract_lines(boxes));
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].member_indices == std::vector<std::size_t>{1, 3, 4, 0, 2});
}

TEST_CASE("two rows three heights apart") {
  const auto f = fixture::rows_fixture({4, 4}, 0.08, 3.0, 0.0);
  const auto lines = extract_lines(f.boxes);
  CHECK(lines.size() == 2);
  CHECK(partition(lines) == truth(f));
  CHECK(partition(lines) == oracle::line_partition(f.boxes, 20, 0.75));
}

TEST_CASE("grouping is invariant to a global rotation in range") {
  const auto flat = fixture::rows_fixture({5, 6, 4}, 0.07, 2.2, 0.0);
  const auto want = partition(extract_lines(flat.boxes));
  for (double deg : {-15.0, -10.0, 10.0, 15.0}) {
    const auto rot = fixture::rows_fixture({5, 6, 4}, 0.07, 2.2, deg);
    CHECK(partition(extract_lines(rot.boxes)) == want);
  }
}

TEST_CASE("extract_lines matches pair-enumeration oracle on small fixtures") {
  Rng rng(41);
  for (int t = 0; t < 60; ++t) {
    std::vector<int> rows;
    int total = 0;
    while (true) {
      const int n = 2 + static_cast<int>(uniform_index(rng, 3));
      if (total + n > 8) break;
      rows.push_back(n);
      total += n;
    }
    const double deg = uniform(rng, -15, 15);
    const auto f = fixture::rows_fixture(rows, 0.06, uniform(rng, 2.0, 3.0), deg, &rng);
    const auto got = partition(extract_lines(f.boxes));
    CHECK(got == oracle::line_partition(f.boxes, 20, 0.75));
    CHECK(got == truth(f));
  }
}

TEST_CASE("orphans attach to a near line or stand alone") {
  std::vector<BBox> boxes{{0.2, 0.5, 0.05, 0.1}, {0.3, 0.5, 0.05, 0.1}, {0.4, 0.5, 0.05, 0.1},
                          {0.9, 0.58, 0.05, 0.1},  // too far along the line to join the run
                          {0.5, 0.9, 0.05, 0.1}};
  const auto lines = reading_order(extract_lines(boxes));
  std::size_t members = 0;
  for (const auto& l : lines) members += l.member_indices.size();
  CHECK(members == boxes.size());
  CHECK(lines.back().member_indices == std::vector<std::size_t>{4});
  // the displaced box is within 2x proximity of the first line and joins it
  CHECK(lines.front().member_indices == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("reading order") {
  auto mk = [](double y, std::vector<std::size_t> m, std::vector<double> pos) {
    TextLine l;
    l.mean_y = y;
    l.member_indices = std::move(m);
    l.positions = std::move(pos);
    return l;
  };
  const auto lines = reading_order({mk(0.7, {0}, {0}), mk(0.3, {2, 1}, {0.5, 0.2}), mk(0.5, {3}, {0})});
  CHECK(lines[0].mean_y == 0.3);
  CHECK(lines[1].mean_y == 0.5);
  CHECK(lines[2].mean_y == 0.7);
  CHECK(lines[0].member_indices == std::vector<std::size_t>{1, 2});
  const auto again = reading_order(lines);
  for (std::size_t i = 0; i < lines.size(); ++i) CHECK(again[i].member_indices == lines[i].member_indices);
}

TEST_CASE("transcribe drops non-characters and round-trips ground truth") {
  const auto& reg = default_registry();
  SealSpec spec;
  spec.text = {{"CROISETTE", "IOTA", "OMEGA"}, {"THETA", "EPSILON", "OMICRON", "TAU"},
               {"KAI", "ALPHA", "NU"}};
  spec.rotation_deg = 10;
  const auto g = generate_seal(spec, 3, reg, "t");
  std::vector<std::string> classes;
  for (const auto& c : reg.classes()) classes.push_back(c.name);  // NON_CHARACTER is last
  std::vector<LabeledDetection> dets;
  for (const auto& c : g.annotation.chars) {
    ClassScores s;
    s.scores.assign(classes.size(), 0.0);
    s.scores[reg.lookup(c.class_name).id] = 1.0;
    dets.push_back({{c.bbox, 1.0}, s});
  }
  ClassScores junk;
  junk.scores.assign(classes.size(), 0.0);
  junk.scores.back() = 1.0;
  dets.push_back({{BBox{0.5, 0.5, 0.05, 0.05}, 0.9}, junk});
  const auto t = transcribe(dets, classes);
  CHECK(t.lines == *g.annotation.transcription_gt);
  std::vector<std::string> flat;
  for (const auto& l : t.lines) flat.insert(flat.end(), l.begin(), l.end());
  CHECK(t.flattened == flat);

  std::vector<LabeledDetection> only_junk{{{BBox{0.5, 0.5, 0.05, 0.05}, 0.9}, junk}};
  const auto empty = transcribe(only_junk, classes);
  CHECK(empty.lines.empty());
  CHECK(empty.flattened.empty());
}

TEST_CASE("substituted labels cost exactly their count") {
  const auto f = fixture::rows_fixture({4, 5}, 0.07, 2.5, 0.0);
  const std::vector<std::string> classes{"ALPHA", "BETA", std::string(kNonCharacter)};
  std::vector<LabeledDetection> dets;
  std::vector<std::string> gt;
  for (std::size_t i = 0; i < f.boxes.size(); ++i) {
    ClassScores s;
    s.scores = {1.0, 0.0, 0.0};
    if (i == 2 || i == 6) s.scores = {0.0, 1.0, 0.0};  // two wrong labels
    dets.push_back({{f.boxes[i], 1.0}, s});
    gt.push_back("ALPHA");
  }
  const auto t = transcribe(dets, classes);
  CHECK(cer(t.flattened, gt) == doctest::Approx(2.0 / 9.0));
}

TEST_CASE("invalid hough parameters") {
  HoughParams p;
  p.theta_step_deg = 0;
  std::vector<BBox> one{{0.5, 0.5, 0.1, 0.1}};
  CHECK_THROWS_AS(extract_lines(one, p), ValidationError);
  CHECK_THROWS_AS(extract_lines(std::vector<BBox>{}), ValidationError);
}
