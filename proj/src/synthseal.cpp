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

#include "sealread/synthseal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "sealread/error.hpp"
#include "sealread/kernels.hpp"
#include "sealread/rng.hpp"

namespace sealread {

void DegradationParams::validate() const {
  if (!(wear_fraction >= 0.0 && wear_fraction <= 1.0))
    throw ValidationError("degradation: wear_fraction must be in [0, 1]");
  if (occlusion_discs < 0) throw ValidationError("degradation: occlusion_discs must be >= 0");
  if (!(occlusion_radius_min > 0.0 && occlusion_radius_min <= occlusion_radius_max &&
        occlusion_radius_max <= 0.5))
    throw ValidationError("degradation: need 0 < occlusion_radius_min <= max <= 0.5");
  if (strike_offset_px < 0) throw ValidationError("degradation: strike_offset_px must be >= 0");
}

void SealSpec::validate(const AlphabetRegistry& registry) const {
  if (diameter_px < 32) throw ValidationError("seal spec: diameter_px must be at least 32");
  if (text.empty()) throw ValidationError("seal spec: no text lines");
  for (std::size_t l = 0; l < text.size(); ++l) {
    if (text[l].empty()) throw ValidationError(fmt::format("seal spec: line {} is empty", l));
    for (const auto& name : text[l]) {
      const auto& c = registry.lookup(name);
      if (c.category == Category::non_character)
        throw ValidationError(fmt::format("seal spec: line {} contains NON_CHARACTER", l));
    }
  }
  if (!(glyph_scale > 0.0)) throw ValidationError("seal spec: glyph_scale must be positive");
  if (!(relief_depth >= 0.0 && relief_depth <= 1.0))
    throw ValidationError("seal spec: relief_depth must be in [0, 1]");
  if (!(noise_sigma >= 0.0)) throw ValidationError("seal spec: noise_sigma must be >= 0");
  degradation.validate();
}

namespace {

struct Metrics {
  double glyph_h;   // glyph box height in pixels
  double stroke_r;  // stroke radius
  double skel_h;    // skeleton box height
  double gap;

  explicit Metrics(double diameter, double scale) {
    glyph_h = scale * diameter * kGlyphHeightRatio;
    stroke_r = kStrokeRatio * glyph_h;
    skel_h = glyph_h - 2.0 * stroke_r;
    gap = kLetterGap * glyph_h;
  }
  double ink_width(std::string_view name) const {
    return glyph_skeleton(name).aspect * skel_h + 2.0 * stroke_r;
  }
};

// Half-width of the usable chord for a line centered `y` pixels off the disc
// center; negative when the line does not fit vertically.
double half_chord(double text_radius, double y, double glyph_h) {
  const double yy = std::abs(y) + 0.5 * glyph_h;
  if (yy >= text_radius) return -1.0;
  return std::sqrt(text_radius * text_radius - yy * yy);
}

}  // namespace

GeneratedSeal generate_seal(const SealSpec& spec, std::uint64_t seed,
                            const AlphabetRegistry& registry, const std::string& seal_id) {
  spec.validate(registry);
  Rng rng(seed);
  const int margin = std::max(4, static_cast<int>(std::lround(0.04 * spec.diameter_px)));
  const int size = spec.diameter_px + 2 * margin;
  const double radius = 0.5 * spec.diameter_px;
  const Point text_center{0.5 * size, 0.5 * size};
  Point disc_center = text_center;
  if (spec.degradation.strike_offset_px > 0) {
    const double a = 2.0 * std::numbers::pi * uniform01(rng);
    disc_center.x += spec.degradation.strike_offset_px * std::cos(a);
    disc_center.y += spec.degradation.strike_offset_px * std::sin(a);
  }

  const Metrics m(spec.diameter_px, spec.glyph_scale);
  const double text_radius = kTextRadius * radius;
  const double pitch = kLinePitch * m.glyph_h;
  const double rot = spec.rotation_deg * std::numbers::pi / 180.0;
  const double cr = std::cos(rot);
  const double sr = std::sin(rot);
  const int n_lines = static_cast<int>(spec.text.size());

  GeneratedSeal out;
  auto& ann = out.annotation;
  ann.seal_id = seal_id;
  ann.collection = "synthetic";
  ann.side = Side::reverse;
  ann.image_path = seal_id + ".png";
  ann.image_w = size;
  ann.image_h = size;
  ann.transcription_gt = spec.text;

  for (int l = 0; l < n_lines; ++l) {
    const auto& line = spec.text[l];
    const double y = (l - 0.5 * (n_lines - 1)) * pitch;
    double total = m.gap * static_cast<double>(line.size() - 1);
    for (const auto& name : line) total += m.ink_width(name);
    const double half = half_chord(text_radius, y, m.glyph_h);
    if (half < 0.0 || total > 2.0 * half)
      throw ValidationError(fmt::format(
          "seal spec: line {} ({} chars, {:.1f}px wide) does not fit the disc at glyph_scale {}",
          l, line.size(), total, half < 0 ? 0.0 : 2.0 * half, spec.glyph_scale));
    double x = -0.5 * total;
    for (const auto& name : line) {
      const double w = m.ink_width(name);
      const double gx = x + 0.5 * w;
      x += w + m.gap;
      const GlyphPlacement p{{text_center.x + cr * gx - sr * y, text_center.y + sr * gx + cr * y},
                             m.skel_h, m.stroke_r, rot};
      auto mask = rasterize(glyph_skeleton(name), p, size, size);
      const auto b = tight_bounds(mask);
      if (b.empty())
        throw ValidationError(fmt::format("seal spec: glyph {} on line {} fell off the image", name, l));
      ann.chars.push_back({from_pixels({double(b.x0), double(b.y0), double(b.x1), double(b.y1)},
                                       size, size),
                           name, l, std::nullopt});
      out.masks.push_back(std::move(mask));
    }
  }

  // Height field: union of glyph masks, smoothed into sloped relief.
  Image height(size, size, 0.0f);
  for (const auto& mask : out.masks) {
    for (int yy = 0; yy < mask.height; ++yy)
      for (int xx = 0; xx < mask.width; ++xx)
        if (mask.bits[static_cast<std::size_t>(yy) * mask.width + xx])
          height.at(mask.x0 + xx, mask.y0 + yy) = 1.0f;
  }
  const int blur = std::max(1, static_cast<int>(std::lround(m.stroke_r)));
  height = box_blur(box_blur(height, blur), blur);
  const float relief = static_cast<float>(spec.relief_depth * 2.0 * m.stroke_r);
  for (auto& v : height.pixels()) v *= relief;
  const Image shade =
      kernels::shade_parallel(height, {spec.lighting_azimuth, 45.0});

  out.image = Image(size, size, kBackground);
  for (int yy = 0; yy < size; ++yy) {
    for (int xx = 0; xx < size; ++xx) {
      const double d = std::hypot(xx + 0.5 - disc_center.x, yy + 0.5 - disc_center.y);
      const double cover = std::clamp(radius + 0.5 - d, 0.0, 1.0);
      if (cover <= 0.0) continue;
      double v = kSealBase * shade.at(xx, yy);
      if (spec.noise_sigma > 0.0) v += spec.noise_sigma * normal(rng);
      v = (1.0 - cover) * kBackground + cover * v;
      out.image.at(xx, yy) = static_cast<float>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
  }
  return out;
}

// Corpus -----------------------------------------------------------------------

namespace {

using nlohmann::json;

template <class T>
void read_range(const json& j, const char* key, std::pair<T, T>& r) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (v.is_array()) {
    if (v.size() != 2) throw ValidationError(fmt::format("corpus config: {} must be [min, max]", key));
    r = {v[0].get<T>(), v[1].get<T>()};
  } else {
    r = {v.get<T>(), v.get<T>()};
  }
  if (r.first > r.second) throw ValidationError(fmt::format("corpus config: {} has min > max", key));
}

json degradation_json(const DegradationParams& d) {
  return {{"wear_fraction", d.wear_fraction},
          {"occlusion_discs", d.occlusion_discs},
          {"occlusion_radius", {d.occlusion_radius_min, d.occlusion_radius_max}},
          {"strike_offset_px", d.strike_offset_px}};
}

DegradationParams degradation_from_json(const json& j) {
  DegradationParams d;
  d.wear_fraction = j.value("wear_fraction", d.wear_fraction);
  d.occlusion_discs = j.value("occlusion_discs", d.occlusion_discs);
  std::pair<double, double> r{d.occlusion_radius_min, d.occlusion_radius_max};
  read_range(j, "occlusion_radius", r);
  d.occlusion_radius_min = r.first;
  d.occlusion_radius_max = r.second;
  d.strike_offset_px = j.value("strike_offset_px", d.strike_offset_px);
  d.validate();
  return d;
}

}  // namespace

json to_json(const CorpusConfig& c) {
  json j = {{"diameter_px", c.diameter_px},
            {"n_lines", {c.n_lines.first, c.n_lines.second}},
            {"glyph_scale", {c.glyph_scale.first, c.glyph_scale.second}},
            {"lighting_azimuth", {c.lighting_azimuth.first, c.lighting_azimuth.second}},
            {"relief_depth", {c.relief_depth.first, c.relief_depth.second}},
            {"noise_sigma", c.noise_sigma},
            {"rotation_deg", {c.rotation_deg.first, c.rotation_deg.second}},
            {"line_fill", {c.line_fill.first, c.line_fill.second}},
            {"degradation", degradation_json(c.degradation)},
            {"side", to_string(c.side)},
            {"collection", c.collection},
            {"id_prefix", c.id_prefix}};
  if (!c.class_weights.empty()) j["class_weights"] = c.class_weights;
  return j;
}

CorpusConfig corpus_config_from_json(const json& j) {
  CorpusConfig c;
  try {
    c.diameter_px = j.value("diameter_px", c.diameter_px);
    read_range(j, "n_lines", c.n_lines);
    read_range(j, "glyph_scale", c.glyph_scale);
    read_range(j, "lighting_azimuth", c.lighting_azimuth);
    read_range(j, "relief_depth", c.relief_depth);
    c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
    read_range(j, "rotation_deg", c.rotation_deg);
    read_range(j, "line_fill", c.line_fill);
    if (j.contains("degradation")) c.degradation = degradation_from_json(j.at("degradation"));
    if (j.contains("class_weights"))
      c.class_weights = j.at("class_weights").get<std::map<std::string, double>>();
    if (j.contains("side")) c.side = side_from_string(j.at("side").get<std::string>());
    c.collection = j.value("collection", c.collection);
    c.id_prefix = j.value("id_prefix", c.id_prefix);
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("corpus config: {}", e.what()));
  }
  if (c.n_lines.first < 1) throw ValidationError("corpus config: n_lines must be >= 1");
  if (c.line_fill.first <= 0.0 || c.line_fill.second > 1.0)
    throw ValidationError("corpus config: line_fill must be within (0, 1]");
  return c;
}

SealSpec sample_seal_spec(const CorpusConfig& config, std::uint64_t seal_seed,
                          const AlphabetRegistry& registry) {
  Rng rng(seal_seed);
  SealSpec spec;
  spec.diameter_px = config.diameter_px;
  spec.noise_sigma = config.noise_sigma;
  spec.degradation = config.degradation;
  const int n_lines = config.n_lines.first +
                      static_cast<int>(uniform_index(
                          rng, static_cast<std::uint64_t>(config.n_lines.second - config.n_lines.first + 1)));
  spec.glyph_scale = uniform(rng, config.glyph_scale.first, config.glyph_scale.second);
  spec.lighting_azimuth = uniform(rng, config.lighting_azimuth.first, config.lighting_azimuth.second);
  spec.relief_depth = uniform(rng, config.relief_depth.first, config.relief_depth.second);
  spec.rotation_deg = uniform(rng, config.rotation_deg.first, config.rotation_deg.second);

  // Cap the glyph size so that all lines fit vertically with some slack.
  const double text_radius = kTextRadius * 0.5 * config.diameter_px;
  const double max_h = 1.8 * text_radius / ((n_lines - 1) * kLinePitch + 1.0);
  spec.glyph_scale =
      std::min(spec.glyph_scale, max_h / (config.diameter_px * kGlyphHeightRatio));

  std::vector<std::pair<std::string, double>> weights;
  for (const auto& c : registry.classes()) {
    if (c.category == Category::non_character) continue;
    double w;
    if (config.class_weights.empty()) {
      const auto& fc = fixture_counts();
      auto it = fc.find(c.name);
      w = it == fc.end() ? 0.0 : static_cast<double>(it->second);
    } else {
      auto it = config.class_weights.find(c.name);
      w = it == config.class_weights.end() ? 0.0 : it->second;
    }
    if (w > 0.0) weights.emplace_back(c.name, w);
  }
  if (weights.empty()) throw ValidationError("corpus config: all class weights are zero");
  double total_w = 0.0;
  for (const auto& [n, w] : weights) total_w += w;
  auto draw = [&]() -> const std::string& {
    double u = uniform01(rng) * total_w;
    for (const auto& [n, w] : weights) {
      if (u < w) return n;
      u -= w;
    }
    return weights.back().first;
  };

  const Metrics m(config.diameter_px, spec.glyph_scale);
  const double pitch = kLinePitch * m.glyph_h;
  for (int l = 0; l < n_lines; ++l) {
    const double y = (l - 0.5 * (n_lines - 1)) * pitch;
    const double half = half_chord(text_radius, y, m.glyph_h);
    const double target = 2.0 * half * uniform(rng, config.line_fill.first, config.line_fill.second);
    std::vector<std::string> line;
    double width = 0.0;
    for (int tries = 0; tries < 64; ++tries) {
      const auto& name = draw();
      const double w = m.ink_width(name) + (line.empty() ? 0.0 : m.gap);
      if (width + w > target) {
        if (!line.empty()) break;
        continue;
      }
      width += w;
      line.push_back(name);
    }
    if (!line.empty()) spec.text.push_back(std::move(line));
  }
  if (spec.text.empty()) throw ValidationError("corpus config: glyphs too large for the disc");
  return spec;
}

GeneratedCorpus generate_corpus(const CorpusConfig& config, int n_seals, std::uint64_t seed,
                                const AlphabetRegistry& registry) {
  if (n_seals < 1) throw ValidationError("n_seals must be at least 1");
  config.degradation.validate();
  const int digits = std::max(4, static_cast<int>(std::to_string(n_seals).size()));
  std::vector<GeneratedSeal> seals(n_seals);
  std::vector<std::string> errors(n_seals);
  const bool damaged = config.degradation.wear_fraction > 0.0 || config.degradation.occlusion_discs > 0;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_seals; ++i) {
    try {
      const std::uint64_t seal_seed = mix_seed(seed, static_cast<std::uint64_t>(i));
      const auto id = fmt::format("{}_{:0{}}", config.id_prefix, i + 1, digits);
      const SealSpec spec = sample_seal_spec(config, mix_seed(seal_seed, 1), registry);
      auto g = generate_seal(spec, seal_seed, registry, id);
      if (damaged) {
        auto [img, ann] = degrade(g.image, g.annotation, config.degradation, mix_seed(seal_seed, 2));
        g.image = std::move(img);
        g.annotation = std::move(ann);
      }
      g.annotation.collection = config.collection;
      g.annotation.side = config.side;
      g.annotation.image_path = "images/" + id + ".png";
      seals[i] = std::move(g);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ValidationError(e);

  GeneratedCorpus out;
  out.manifest.registry_version = registry.version();
  out.manifest.provenance = {{"generator", "sealread synthseal"},
                             {"seed", seed},
                             {"n_seals", n_seals},
                             {"config", to_json(config)}};
  for (auto& g : seals) {
    out.manifest.seals.push_back(std::move(g.annotation));
    out.images.push_back(std::move(g.image));
  }
  return out;
}

CorpusManifest write_corpus(const GeneratedCorpus& corpus, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "images", ec);
  if (ec) throw RuntimeFailure(fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));
  for (std::size_t i = 0; i < corpus.images.size(); ++i)
    write_png(corpus.images[i], out_dir / corpus.manifest.seals[i].image_path);
  save_manifest(corpus.manifest, out_dir / "manifest.json");
  return corpus.manifest;
}

}  // namespace sealread
