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

#include <numeric>

#include "doctest.h"
#include "sealread/alphabet.hpp"
#include "sealread/error.hpp"

using namespace sealread;

TEST_CASE("default registry shape") {
  const auto& r = default_registry();
  CHECK(r.size() == 30);
  int pseudo = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& c = r.classes()[i];
    CHECK(c.id == static_cast<ClassId>(i));
    if (c.category == Category::non_character) {
      ++pseudo;
      CHECK(c.codepoints.empty());
    } else {
      CHECK(!c.codepoints.empty());
    }
  }
  CHECK(pseudo == 1);
  CHECK(r.non_character().name == kNonCharacter);
}

TEST_CASE("lookups") {
  const auto& r = default_registry();
  const auto& cross = r.lookup("CROISETTE");
  CHECK(cross.category == Category::symbol);
  CHECK(cross.codepoints.size() == 1);
  CHECK(r.lookup("OU_LIGATURE").codepoints == U"ου");
  CHECK(r.lookup("CT_LIGATURE").codepoints == U"στ");
  CHECK_THROWS_AS(r.lookup("OMEGA_TYPO"), ValidationError);
  CHECK(r.find("OMEGA_TYPO") == nullptr);
  for (const auto& c : r.classes()) {
    CHECK(&r.at(c.id) == &r.lookup(c.name));
    if (!c.codepoints.empty()) CHECK(r.find_codepoints(c.codepoints) == &r.lookup(c.name));
  }
  CHECK(r.glyph_text(r.lookup("ALPHA").id) == "Α");
}

TEST_CASE("bundled counts") {
  const auto& counts = fixture_counts();
  CHECK(counts.size() == 29);
  CHECK(std::accumulate(counts.begin(), counts.end(), std::int64_t{0},
                        [](std::int64_t s, const auto& kv) { return s + kv.second; }) == 2313);
  int small = 0, at_least_10 = 0;
  for (const auto& [name, n] : counts) {
    small += n < 10;
    at_least_10 += n >= 10;
  }
  CHECK(small == 5);
  CHECK(at_least_10 == 24);
}

TEST_CASE("classification subset") {
  const auto& r = default_registry();
  SUBCASE("at least 50 samples") {
    const auto s = classification_subset(r, fixture_counts(), 50);
    CHECK(s.size() == 21);
    CHECK(s.back().name == kNonCharacter);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      CHECK(fixture_counts().at(s[i].name) >= 50);
      if (i + 2 < s.size()) {
        const auto a = fixture_counts().at(s[i].name), b = fixture_counts().at(s[i + 1].name);
        CHECK((a > b || (a == b && s[i].id < s[i + 1].id)));
      }
    }
  }
  SUBCASE("threshold disabled") {
    std::map<std::string, std::int64_t> counts = fixture_counts();
    counts["PSI"] = 0;
    const auto s = classification_subset(r, counts, 1);
    CHECK(s.size() == 29);
  }
  SUBCASE("three classes over 100") {
    std::map<std::string, std::int64_t> counts;
    for (const auto& c : r.classes())
      if (c.category != Category::non_character) counts[c.name] = 5;
    counts["RHO"] = 120;
    counts["ALPHA"] = 300;
    counts["TAU"] = 120;
    const auto s = classification_subset(r, counts, 100);
    REQUIRE(s.size() == 4);
    CHECK(s[0].name == "ALPHA");
    CHECK(s[1].name == "RHO");  // equal counts: lower id first
    CHECK(s[2].name == "TAU");
    CHECK(s[3].name == kNonCharacter);
  }
  SUBCASE("idempotent") {
    const auto s = classification_subset(r, fixture_counts(), 50);
    std::map<std::string, std::int64_t> again;
    for (const auto& c : s)
      if (c.name != kNonCharacter) again[c.name] = fixture_counts().at(c.name);
    const auto s2 = classification_subset(r, again, 50);
    CHECK(s2 == s);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(classification_subset(r, fixture_counts(), 0), ValidationError);
    CHECK_THROWS_AS(classification_subset(r, fixture_counts(), 100000), ValidationError);
  }
}

TEST_CASE("registry json round trip") {
  nlohmann::json j;
  to_json(j, default_registry());
  const auto back = registry_from_json(j);
  CHECK(back.classes() == default_registry().classes());
  CHECK(back.version() == default_registry().version());
}

TEST_CASE("registry invariants are enforced") {
  auto classes = default_registry().classes();
  auto dup = classes;
  dup[1].name = dup[0].name;
  CHECK_THROWS_AS(AlphabetRegistry(dup, "x"), ValidationError);
  auto no_cp = classes;
  no_cp[0].codepoints.clear();
  CHECK_THROWS_AS(AlphabetRegistry(no_cp, "x"), ValidationError);
  auto two_pseudo = classes;
  two_pseudo[0].category = Category::non_character;
  CHECK_THROWS_AS(AlphabetRegistry(two_pseudo, "x"), ValidationError);
}
