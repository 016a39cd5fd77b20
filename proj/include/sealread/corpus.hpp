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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sealread/alphabet.hpp"
#include "sealread/geometry.hpp"
#include "sealread/image.hpp"

namespace sealread {

enum class Side { obverse, reverse };

std::string_view to_string(Side s);
Side side_from_string(std::string_view s);

struct CharBox {
  BBox bbox;
  std::string class_name;
  std::optional<int> line_hint;
  /// Fraction of the glyph's relief removed by simulated damage, when known.
  std::optional<double> damage;

  bool operator==(const CharBox&) const = default;
};

using TextLines = std::vector<std::vector<std::string>>;

struct SealAnnotation {
  std::string seal_id;
  std::string collection;
  Side side = Side::reverse;
  std::string image_path;
  int image_w = 0;
  int image_h = 0;
  std::vector<CharBox> chars;
  std::optional<TextLines> transcription_gt;

  bool operator==(const SealAnnotation&) const = default;
};

struct CorpusManifest {
  std::string registry_version;
  std::vector<SealAnnotation> seals;
  nlohmann::json provenance = nlohmann::json::object();

  const SealAnnotation* find(std::string_view seal_id) const;
  const SealAnnotation& at(std::string_view seal_id) const;
};

/// Throws ValidationError naming the seal and field path of the first violation.
void validate_seal(const SealAnnotation& seal, const AlphabetRegistry& registry);
void validate_manifest(const CorpusManifest& manifest, const AlphabetRegistry& registry);

nlohmann::json to_json(const SealAnnotation& seal);
nlohmann::json to_json(const CorpusManifest& manifest);
CorpusManifest manifest_from_json(const nlohmann::json& j,
                                  const AlphabetRegistry& registry = default_registry());

CorpusManifest load_manifest(const std::filesystem::path& path,
                             const AlphabetRegistry& registry = default_registry());
void save_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);

/// Loads a seal's raster relative to `root` and checks it against the annotated size.
Image load_seal_image(const SealAnnotation& seal, const std::filesystem::path& root);

/// Per-class character counts, optionally restricted to one side.
std::map<std::string, std::int64_t> class_counts(const CorpusManifest& manifest,
                                                 std::optional<Side> side = std::nullopt);

/// Flattened ground-truth transcription, or nullopt when the seal has none.
std::optional<std::vector<std::string>> flattened_gt(const SealAnnotation& seal);

// Folds ---------------------------------------------------------------------

struct FoldPlan {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::string>> folds;

  bool operator==(const FoldPlan&) const = default;
};

/// Seal-level partition into k folds. Seals are sorted by id, shuffled with
/// `seed`, then chunked; the first n % k folds receive one extra seal.
FoldPlan make_folds(const CorpusManifest& manifest, int k, std::uint64_t seed,
                    std::optional<Side> side_filter = std::nullopt);

struct FoldSplit {
  std::vector<const SealAnnotation*> train;
  std::vector<const SealAnnotation*> test;
};

/// Test side is fold `test_fold`; train side is every other fold plus
/// `augment_ids`. Throws LeakageError when an augmentation seal is in the test fold.
FoldSplit fold_split(const FoldPlan& plan, int test_fold, const CorpusManifest& manifest,
                     std::span<const std::string> augment_ids = {});

/// Up to `count` obverse seals that are not part of the plan, chosen by `seed`.
std::vector<std::string> select_augmentation(const CorpusManifest& manifest, const FoldPlan& plan,
                                             int count, std::uint64_t seed);

nlohmann::json to_json(const FoldPlan& plan);
FoldPlan fold_plan_from_json(const nlohmann::json& j);

/// Seed for per-iteration non-character resampling.
std::uint64_t noncharacter_seed(std::uint64_t plan_seed, int fold_index,
                                std::string_view seal_id);

// Crops and negatives ---------------------------------------------------------

struct Crop {
  Image image;
  std::string class_name;
  std::size_t char_index = 0;
};

struct CropWarning {
  std::string seal_id;
  std::size_t char_index = 0;
  std::string message;
};

/// Source region for a padded box: pad_fraction * max(w, h) pixels added on
/// each side, clipped to the image.
PixelRect padded_region(const BBox& box, int image_w, int image_h, double pad_fraction);

/// Crop of one box resampled to out_size x out_size; nullopt when the clipped
/// region has zero area.
std::optional<Image> crop_box(const Image& image, const BBox& box, double pad_fraction,
                              int out_size);

struct CropSet {
  std::vector<Crop> crops;
  std::vector<CropWarning> warnings;
};

CropSet extract_crops(const SealAnnotation& seal, const Image& image, double pad_fraction,
                      int out_size);

inline constexpr double kNonCharacterMaxIou = 0.10;
inline constexpr int kNonCharacterAttemptsPerBox = 1000;

struct NonCharacterSample {
  std::vector<CharBox> boxes;
  std::optional<std::string> warning;
};

/// Random NON_CHARACTER boxes of the seal's mean character size, centered in
/// the inscribed seal disc, each with IoU < 0.10 against every character box.
NonCharacterSample sample_noncharacters(const SealAnnotation& seal, int count,
                                        std::uint64_t rng_seed);

}  // namespace sealread
