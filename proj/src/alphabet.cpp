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

#include "sealread/alphabet.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include "json.hpp"

#include "sealread/error.hpp"

namespace sealread {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::letter: return "letter";
    case Category::ligature: return "ligature";
    case Category::abbreviation: return "abbreviation";
    case Category::symbol: return "symbol";
    case Category::non_character: return "non_character";
  }
  return "letter";
}

Category category_from_string(std::string_view s) {
  for (auto c : {Category::letter, Category::ligature, Category::abbreviation, Category::symbol,
                 Category::non_character}) {
    if (to_string(c) == s) return c;
  }
  throw ValidationError(fmt::format("unknown class category '{}'", s));
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  for (char32_t c : s) {
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else if (c < 0x800) {
      out += static_cast<char>(0xC0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
      out += static_cast<char>(0xE0 | (c >> 12));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (c >> 18));
      out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    }
  }
  return out;
}

AlphabetRegistry::AlphabetRegistry(std::vector<CharClass> classes, std::string version)
    : classes_(std::move(classes)), version_(std::move(version)) {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    if (c.id != static_cast<ClassId>(i))
      throw ValidationError(fmt::format("registry: class '{}' has id {}, expected {}", c.name,
                                        c.id, i));
    if (c.name.empty()) throw ValidationError(fmt::format("registry: class {} has no name", i));
    if (!by_name_.emplace(c.name, c.id).second)
      throw ValidationError(fmt::format("registry: duplicate class name '{}'", c.name));
    if (c.corpus_count < 0)
      throw ValidationError(fmt::format("registry: class '{}' has negative count", c.name));
    if (c.category == Category::non_character) {
      if (non_character_id_ >= 0)
        throw ValidationError("registry: more than one non_character class");
      if (c.name != kNonCharacter)
        throw ValidationError("registry: the non_character class must be named NON_CHARACTER");
      non_character_id_ = c.id;
    } else {
      if (c.codepoints.empty())
        throw ValidationError(fmt::format("registry: class '{}' has no codepoints", c.name));
      if (!by_codepoints_.emplace(c.codepoints, c.id).second)
        throw ValidationError(
            fmt::format("registry: class '{}' repeats another class's codepoints", c.name));
    }
  }
  if (non_character_id_ < 0) throw ValidationError("registry: NON_CHARACTER class missing");
}

const CharClass& AlphabetRegistry::at(ClassId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= classes_.size())
    throw ValidationError(fmt::format("class id {} out of range", id));
  return classes_[id];
}

const CharClass* AlphabetRegistry::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &classes_[it->second];
}

const CharClass& AlphabetRegistry::lookup(std::string_view name) const {
  if (const auto* c = find(name)) return *c;
  throw ValidationError(fmt::format("unknown class name '{}'", name));
}

const CharClass* AlphabetRegistry::find_codepoints(std::u32string_view cps) const {
  auto it = by_codepoints_.find(cps);
  return it == by_codepoints_.end() ? nullptr : &classes_[it->second];
}

AlphabetRegistry AlphabetRegistry::with_counts(
    const std::map<std::string, std::int64_t>& counts) const {
  auto classes = classes_;
  for (auto& c : classes) {
    if (auto it = counts.find(c.name); it != counts.end()) c.corpus_count = it->second;
  }
  return AlphabetRegistry(std::move(classes), version_);
}

std::string AlphabetRegistry::glyph_text(ClassId id) const { return to_utf8(at(id).codepoints); }

namespace {

struct ClassSeed {
  const char* name;
  std::u32string_view codepoints;
  Category category;
  std::int64_t count;
};

// Occurrence counts reconstructed from the glyph inventory figure: 20 classes
// with at least 50 samples, 24 with at least 10, and the five rare classes
// (zeta, xi, psi, closed beta, CT) below 10.
constexpr ClassSeed kSeeds[] = {
    {"ALPHA", U"Α", Category::letter, 170},
    {"BETA", U"Β", Category::letter, 40},
    {"GAMMA", U"Γ", Category::letter, 45},
    {"DELTA", U"Δ", Category::letter, 60},
    {"EPSILON", U"Ε", Category::letter, 150},
    {"ZETA", U"Ζ", Category::letter, 4},
    {"ETA", U"Η", Category::letter, 95},
    {"THETA", U"Θ", Category::letter, 90},
    {"IOTA", U"Ι", Category::letter, 150},
    {"KAPPA", U"Κ", Category::letter, 110},
    {"LAMBDA", U"Λ", Category::letter, 70},
    {"MU", U"Μ", Category::letter, 105},
    {"NU", U"Ν", Category::letter, 150},
    {"XI", U"Ξ", Category::letter, 6},
    {"OMICRON", U"Ο", Category::letter, 170},
    {"PI", U"Π", Category::letter, 85},
    {"RHO", U"Ρ", Category::letter, 120},
    {"SIGMA", U"Σ", Category::letter, 130},
    {"TAU", U"Τ", Category::letter, 115},
    {"UPSILON", U"Υ", Category::letter, 95},
    {"PHI", U"Φ", Category::letter, 45},
    {"CHI", U"Χ", Category::letter, 50},
    {"PSI", U"Ψ", Category::letter, 3},
    {"OMEGA", U"Ω", Category::letter, 65},
    {"BETA_CLOSED", U"ϐ", Category::letter, 5},
    {"OU_LIGATURE", U"ου", Category::ligature, 80},
    {"CT_LIGATURE", U"στ", Category::ligature, 7},
    {"KAI", U"ϗ", Category::abbreviation, 30},
    {"CROISETTE", U"+", Category::symbol, 68},
};

}  // namespace

const AlphabetRegistry& default_registry() {
  static const AlphabetRegistry registry = [] {
    std::vector<CharClass> classes;
    for (const auto& s : kSeeds) {
      classes.push_back({static_cast<ClassId>(classes.size()), s.name,
                         std::u32string(s.codepoints), s.category, s.count});
    }
    classes.push_back({static_cast<ClassId>(classes.size()), std::string(kNonCharacter), U"",
                       Category::non_character, 0});
    return AlphabetRegistry(std::move(classes), "seal-alphabet/1");
  }();
  return registry;
}

const std::map<std::string, std::int64_t>& fixture_counts() {
  static const auto counts = [] {
    std::map<std::string, std::int64_t> m;
    for (const auto& s : kSeeds) m[s.name] = s.count;
    return m;
  }();
  return counts;
}

std::vector<CharClass> classification_subset(const AlphabetRegistry& registry,
                                             const std::map<std::string, std::int64_t>& counts,
                                             std::int64_t min_samples) {
  if (min_samples < 1) throw ValidationError("classification_subset: min_samples must be >= 1");
  std::vector<std::pair<std::int64_t, ClassId>> kept;
  for (const auto& c : registry.classes()) {
    if (c.category == Category::non_character) continue;
    auto it = counts.find(c.name);
    const std::int64_t n = it == counts.end() ? 0 : it->second;
    if (n >= min_samples) kept.emplace_back(n, c.id);
  }
  if (kept.empty())
    throw ValidationError(
        fmt::format("classification_subset: no class has at least {} samples", min_samples));
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<CharClass> out;
  out.reserve(kept.size() + 1);
  for (const auto& [n, id] : kept) out.push_back(registry.at(id));
  out.push_back(registry.non_character());
  return out;
}

void to_json(nlohmann::json& j, const AlphabetRegistry& r) {
  j = nlohmann::json::object();
  j["format"] = "sealread-registry";
  j["version"] = r.version();
  auto& arr = j["classes"] = nlohmann::json::array();
  for (const auto& c : r.classes()) {
    arr.push_back({{"id", c.id},
                   {"name", c.name},
                   {"text", to_utf8(c.codepoints)},
                   {"category", to_string(c.category)},
                   {"corpus_count", c.corpus_count}});
  }
}

namespace {

std::u32string from_utf8(const std::string& s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) throw ValidationError("invalid UTF-8 in class text");
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out += cp;
    i += len;
  }
  return out;
}

}  // namespace

AlphabetRegistry registry_from_json(const nlohmann::json& j) {
  try {
    std::vector<CharClass> classes;
    for (const auto& c : j.at("classes")) {
      classes.push_back({c.at("id").get<int>(), c.at("name").get<std::string>(),
                         from_utf8(c.at("text").get<std::string>()),
                         category_from_string(c.at("category").get<std::string>()),
                         c.value("corpus_count", std::int64_t{0})});
    }
    return AlphabetRegistry(std::move(classes), j.at("version").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("registry document: {}", e.what()));
  }
}

}  // namespace sealread
