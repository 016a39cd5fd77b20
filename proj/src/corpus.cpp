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
#include <fstream>

#include <fmt/format.h>

#include "sealread/corpus.hpp"
#include "sealread/error.hpp"

namespace sealread {

using nlohmann::json;

std::string_view to_string(Side s) { return s == Side::obverse ? "obverse" : "reverse"; }

Side side_from_string(std::string_view s) {
  if (s == "obverse") return Side::obverse;
  if (s == "reverse") return Side::reverse;
  throw ValidationError(fmt::format("unknown side '{}'", s));
}

const SealAnnotation* CorpusManifest::find(std::string_view seal_id) const {
  auto it = std::find_if(seals.begin(), seals.end(),
                         [&](const SealAnnotation& s) { return s.seal_id == seal_id; });
  return it == seals.end() ? nullptr : &*it;
}

const SealAnnotation& CorpusManifest::at(std::string_view seal_id) const {
  if (const auto* s = find(seal_id)) return *s;
  throw ValidationError(fmt::format("unknown seal_id '{}'", seal_id));
}

void validate_seal(const SealAnnotation& seal, const AlphabetRegistry& registry) {
  auto fail = [&](const std::string& field, const std::string& what) {
    throw ValidationError(fmt::format("seal '{}': {}: {}", seal.seal_id, field, what));
  };
  if (seal.seal_id.empty()) throw ValidationError("seal with empty seal_id");
  if (seal.image_w <= 0 || seal.image_h <= 0)
    fail("image_w/image_h", "image dimensions must be positive");
  for (std::size_t i = 0; i < seal.chars.size(); ++i) {
    const auto& c = seal.chars[i];
    const auto field = fmt::format("chars[{}]", i);
    if (!registry.find(c.class_name))
      fail(field + ".class_name", fmt::format("unknown class name '{}'", c.class_name));
    if (!is_valid(c.bbox))
      fail(field + ".bbox", fmt::format("box out of range ({}, {}, {}, {})", c.bbox.cx, c.bbox.cy,
                                        c.bbox.w, c.bbox.h));
    if (c.line_hint && *c.line_hint < 0) fail(field + ".line_hint", "must be nonnegative");
    if (c.damage && (*c.damage < 0.0 || *c.damage > 1.0)) fail(field + ".damage", "not in [0,1]");
  }
  if (!seal.transcription_gt) return;
  std::map<std::string, int> balance;
  for (const auto& c : seal.chars) {
    if (c.class_name != kNonCharacter) ++balance[c.class_name];
  }
  const auto& lines = *seal.transcription_gt;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    for (std::size_t i = 0; i < lines[l].size(); ++i) {
      const auto& name = lines[l][i];
      const auto field = fmt::format("transcription_gt[{}][{}]", l, i);
      if (!registry.find(name)) fail(field, fmt::format("unknown class name '{}'", name));
      if (name == kNonCharacter) fail(field, "NON_CHARACTER cannot appear in a transcription");
      --balance[name];
    }
  }
  for (const auto& [name, n] : balance) {
    if (n > 0)
      fail("transcription_gt", fmt::format("missing {} occurrence(s) of {} present in chars", n, name));
    if (n < 0)
      fail("transcription_gt", fmt::format("{} extra occurrence(s) of {} absent from chars", -n, name));
  }
}

void validate_manifest(const CorpusManifest& manifest, const AlphabetRegistry& registry) {
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < manifest.seals.size(); ++i) {
    const auto& s = manifest.seals[i];
    if (auto [it, fresh] = seen.emplace(s.seal_id, i); !fresh)
      throw ValidationError(fmt::format("seal '{}': seals[{}].seal_id: duplicate of seals[{}]",
                                        s.seal_id, i, it->second));
    validate_seal(s, registry);
  }
}

json to_json(const SealAnnotation& seal) {
  json chars = json::array();
  for (const auto& c : seal.chars) {
    json jc = {{"class_name", c.class_name},
               {"bbox", {c.bbox.cx, c.bbox.cy, c.bbox.w, c.bbox.h}}};
    if (c.line_hint) jc["line_hint"] = *c.line_hint;
    if (c.damage) jc["damage"] = *c.damage;
    chars.push_back(std::move(jc));
  }
  json j = {{"seal_id", seal.seal_id},       {"collection", seal.collection},
            {"side", to_string(seal.side)},  {"image_path", seal.image_path},
            {"image_w", seal.image_w},       {"image_h", seal.image_h},
            {"chars", std::move(chars)}};
  if (seal.transcription_gt) j["transcription_gt"] = *seal.transcription_gt;
  return j;
}

json to_json(const CorpusManifest& manifest) {
  json seals = json::array();
  for (const auto& s : manifest.seals) seals.push_back(to_json(s));
  return {{"format", "sealread-manifest"},
          {"format_version", 1},
          {"registry_version", manifest.registry_version},
          {"provenance", manifest.provenance},
          {"seals", std::move(seals)}};
}

namespace {

// Field access that reports the JSON path of the failure.
class Reader {
 public:
  Reader(const json& j, std::string path, std::string seal = {})
      : j_(j), path_(std::move(path)), seal_(std::move(seal)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    if (seal_.empty()) throw ValidationError(fmt::format("{}{}: {}", path_, field, what));
    throw ValidationError(fmt::format("seal '{}': {}{}: {}", seal_, path_, field, what));
  }

  const json& at(const char* key) const {
    if (!j_.is_object()) fail("", "expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) fail(std::string(".") + key, "missing field");
    return *it;
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  template <class T>
  T get(const char* key) const {
    const auto& v = at(key);
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      fail(std::string(".") + key, fmt::format("wrong type ({})", v.type_name()));
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::string seal_;
};

SealAnnotation seal_from_json(const json& j, std::size_t index) {
  const std::string path = fmt::format("seals[{}]", index);
  SealAnnotation s;
  s.seal_id = Reader(j, path).get<std::string>("seal_id");
  Reader r(j, path, s.seal_id);
  s.collection = r.get<std::string>("collection");
  try {
    s.side = side_from_string(r.get<std::string>("side"));
  } catch (const ValidationError& e) {
    r.fail(".side", e.what());
  }
  s.image_path = r.get<std::string>("image_path");
  s.image_w = r.get<int>("image_w");
  s.image_h = r.get<int>("image_h");
  const auto& chars = r.at("chars");
  if (!chars.is_array()) r.fail(".chars", "expected an array");
  for (std::size_t i = 0; i < chars.size(); ++i) {
    Reader rc(chars[i], fmt::format("{}.chars[{}]", path, i), s.seal_id);
    CharBox c;
    c.class_name = rc.get<std::string>("class_name");
    const auto bb = rc.get<std::vector<double>>("bbox");
    if (bb.size() != 4) rc.fail(".bbox", "expected four numbers (cx, cy, w, h)");
    c.bbox = {bb[0], bb[1], bb[2], bb[3]};
    if (rc.has("line_hint")) c.line_hint = rc.get<int>("line_hint");
    if (rc.has("damage")) c.damage = rc.get<double>("damage");
    s.chars.push_back(std::move(c));
  }
  if (r.has("transcription_gt") && !r.at("transcription_gt").is_null())
    s.transcription_gt = r.get<TextLines>("transcription_gt");
  return s;
}

}  // namespace

CorpusManifest manifest_from_json(const json& j, const AlphabetRegistry& registry) {
  Reader r(j, "manifest");
  if (r.has("format") && r.get<std::string>("format") != "sealread-manifest")
    r.fail(".format", "not a sealread manifest");
  CorpusManifest m;
  m.registry_version = r.get<std::string>("registry_version");
  if (r.has("provenance")) m.provenance = r.at("provenance");
  const auto& seals = r.at("seals");
  if (!seals.is_array()) r.fail(".seals", "expected an array");
  for (std::size_t i = 0; i < seals.size(); ++i) m.seals.push_back(seal_from_json(seals[i], i));
  validate_manifest(m, registry);
  return m;
}

CorpusManifest load_manifest(const std::filesystem::path& path, const AlphabetRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open manifest {}", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("manifest {}: {}", path.string(), e.what()));
  }
  return manifest_from_json(j, registry);
}

void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure(fmt::format("cannot write manifest {}", path.string()));
  out << to_json(manifest).dump(1) << '\n';
  if (!out) throw RuntimeFailure(fmt::format("write failed for {}", path.string()));
}

Image load_seal_image(const SealAnnotation& seal, const std::filesystem::path& root) {
  Image img = read_png(root / seal.image_path);
  if (img.width() != seal.image_w || img.height() != seal.image_h)
    throw ValidationError(fmt::format("seal '{}': image is {}x{}, annotation says {}x{}",
                                      seal.seal_id, img.width(), img.height(), seal.image_w,
                                      seal.image_h));
  return img;
}

std::map<std::string, std::int64_t> class_counts(const CorpusManifest& manifest,
                                                 std::optional<Side> side) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& s : manifest.seals) {
    if (side && s.side != *side) continue;
    for (const auto& c : s.chars) ++counts[c.class_name];
  }
  return counts;
}

std::optional<std::vector<std::string>> flattened_gt(const SealAnnotation& seal) {
  if (!seal.transcription_gt) return std::nullopt;
  std::vector<std::string> flat;
  for (const auto& line : *seal.transcription_gt) flat.insert(flat.end(), line.begin(), line.end());
  return flat;
}

}  // namespace sealread
