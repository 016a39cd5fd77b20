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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sealread {

enum class Category { letter, ligature, abbreviation, symbol, non_character };

std::string_view to_string(Category c);
Category category_from_string(std::string_view s);

using ClassId = int;

struct CharClass {
  ClassId id = 0;
  std::string name;
  std::u32string codepoints;
  Category category = Category::letter;
  std::int64_t corpus_count = 0;

  bool operator==(const CharClass&) const = default;
};

inline constexpr std::string_view kNonCharacter = "NON_CHARACTER";

/// Immutable, ordered set of character classes. Ids are contiguous and equal
/// to the position in classes().
class AlphabetRegistry {
 public:
  /// Validates all registry invariants; throws ValidationError.
  AlphabetRegistry(std::vector<CharClass> classes, std::string version);

  const std::vector<CharClass>& classes() const { return classes_; }
  const std::string& version() const { return version_; }
  std::size_t size() const { return classes_.size(); }

  const CharClass& at(ClassId id) const;
  /// Throws ValidationError on unknown name.
  const CharClass& lookup(std::string_view name) const;
  const CharClass* find(std::string_view name) const;
  const CharClass* find_codepoints(std::u32string_view cps) const;
  const CharClass& non_character() const { return classes_[non_character_id_]; }

  /// Copy with corpus_count replaced for every class named in `counts`.
  AlphabetRegistry with_counts(const std::map<std::string, std::int64_t>& counts) const;

  /// UTF-8 rendering of a class for transcriptions.
  std::string glyph_text(ClassId id) const;

 private:
  std::vector<CharClass> classes_;
  std::string version_;
  std::map<std::string, ClassId, std::less<>> by_name_;
  std::map<std::u32string, ClassId, std::less<>> by_codepoints_;
  ClassId non_character_id_ = -1;
};

/// The 29 glyph classes of the seal alphabet plus NON_CHARACTER, with the
/// bundled occurrence counts.
const AlphabetRegistry& default_registry();

/// Bundled per-class occurrence counts (class name -> count).
const std::map<std::string, std::int64_t>& fixture_counts();

/// Classes with count >= min_samples, by descending count then ascending id,
/// followed by NON_CHARACTER. Classes missing from `counts` count as zero.
/// Throws ValidationError when min_samples < 1 or nothing meets the threshold.
std::vector<CharClass> classification_subset(const AlphabetRegistry& registry,
                                             const std::map<std::string, std::int64_t>& counts,
                                             std::int64_t min_samples);

std::string to_utf8(std::u32string_view s);

void to_json(nlohmann::json& j, const AlphabetRegistry& r);
AlphabetRegistry registry_from_json(const nlohmann::json& j);

}  // namespace sealread
