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
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sealread/alphabet.hpp"
#include "sealread/corpus.hpp"
#include "sealread/glyphs.hpp"
#include "sealread/image.hpp"

namespace sealread {

/// Simulated damage. Ranges are generator choices, not measured wear rates.
struct DegradationParams {
  double wear_fraction = 0.0;        // [0, 1], fraction of each glyph's relief erased
  int occlusion_discs = 0;           // >= 0
  double occlusion_radius_min = 0.02;  // fraction of the seal diameter
  double occlusion_radius_max = 0.05;
  int strike_offset_px = 0;  // off-center strike: flan shifted against the text

  void validate() const;
};

struct SealSpec {
  int diameter_px = 320;
  std::vector<std::vector<std::string>> text;  // lines of class names
  double glyph_scale = 1.0;
  double lighting_azimuth = 135.0;  // degrees
  double relief_depth = 1.0;        // [0, 1]
  double noise_sigma = 0.0;         // gray levels
  double rotation_deg = 0.0;
  DegradationParams degradation;

  void validate(const AlphabetRegistry& registry) const;
};

// Layout constants, in units of the seal diameter or glyph height.
inline constexpr double kGlyphHeightRatio = 0.085;  // glyph height / diameter at scale 1
inline constexpr double kLinePitch = 2.2;           // line pitch / glyph height
inline constexpr double kLetterGap = 0.32;          // gap between glyph inks / glyph height
inline constexpr double kStrokeRatio = 0.07;        // stroke radius / glyph height
inline constexpr double kTextRadius = 0.9;          // usable radius / seal radius
inline constexpr float kBackground = 255.0f;
inline constexpr float kSealBase = 150.0f;

struct GeneratedSeal {
  Image image;
  SealAnnotation annotation;
  std::vector<GlyphMask> masks;  // one per annotation char, same order
};

/// Renders an embossed seal: glyph masks -> smoothed height field ->
/// directional shading of a same-hue disc. Boxes are tight around each
/// glyph mask. Throws ValidationError when a line does not fit the disc.
GeneratedSeal generate_seal(const SealSpec& spec, std::uint64_t seed,
                            const AlphabetRegistry& registry = default_registry(),
                            const std::string& seal_id = "synthetic");

/// Per-seal parameter distributions for corpus generation. Ranges are
/// inclusive [min, max] and sampled uniformly.
struct CorpusConfig {
  int diameter_px = 320;
  std::pair<int, int> n_lines{3, 5};
  std::pair<double, double> glyph_scale{0.95, 1.05};
  std::pair<double, double> lighting_azimuth{135.0, 135.0};
  std::pair<double, double> relief_depth{0.85, 1.0};
  double noise_sigma = 2.0;
  std::pair<double, double> rotation_deg{-4.0, 4.0};
  std::pair<double, double> line_fill{0.6, 0.95};
  DegradationParams degradation;
  /// Class sampling weights; empty means the bundled occurrence counts.
  std::map<std::string, double> class_weights;
  Side side = Side::reverse;
  std::string collection = "synthetic";
  std::string id_prefix = "syn";
};

nlohmann::json to_json(const CorpusConfig& c);
CorpusConfig corpus_config_from_json(const nlohmann::json& j);

/// Samples the spec of the index-th seal of a corpus.
SealSpec sample_seal_spec(const CorpusConfig& config, std::uint64_t seal_seed,
                          const AlphabetRegistry& registry = default_registry());

struct GeneratedCorpus {
  CorpusManifest manifest;
  std::vector<Image> images;
};

/// In-memory corpus; seal i uses seed mix_seed(seed, i). Parallel over seals
/// with results identical to a sequential run.
GeneratedCorpus generate_corpus(const CorpusConfig& config, int n_seals, std::uint64_t seed,
                                const AlphabetRegistry& registry = default_registry());

/// Writes images under out_dir/images/ and out_dir/manifest.json.
CorpusManifest write_corpus(const GeneratedCorpus& corpus, const std::filesystem::path& out_dir);

/// Erodes glyph relief and stamps occlusion discs. Boxes are unchanged; each
/// char gets its damaged relief fraction. Zero wear and no discs returns the
/// input unchanged. strike_offset_px only applies at render time.
std::pair<Image, SealAnnotation> degrade(const Image& image, const SealAnnotation& annotation,
                                         const DegradationParams& params, std::uint64_t seed);

}  // namespace sealread
