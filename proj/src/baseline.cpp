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

#include "sealread/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "sealread/error.hpp"
#include "sealread/kernels.hpp"

namespace sealread {

using nlohmann::json;

namespace {

constexpr float kMinLocalStd = 4.0f;

json image_json(const Image& img) {
  return {{"w", img.width()},
          {"h", img.height()},
          {"data", std::vector<float>(img.pixels().begin(), img.pixels().end())}};
}

Image image_from_json(const json& j) {
  Image img(j.at("w").get<int>(), j.at("h").get<int>());
  const auto data = j.at("data").get<std::vector<float>>();
  if (data.size() != img.pixels().size()) throw ValidationError("template image size mismatch");
  std::copy(data.begin(), data.end(), img.pixels().begin());
  return img;
}

void accumulate(Image& acc, const Image& x) {
  auto a = acc.pixels();
  auto b = x.pixels();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

void scale(Image& img, float s) {
  for (auto& v : img.pixels()) v *= s;
}

PixelRect context_region(const BBox& box, int w, int h, double context, int factor) {
  const PixelRect r = to_pixels(box, w, h);
  const double m = context * std::max(r.width(), r.height());
  return {(r.x0 - m) / factor, (r.y0 - m) / factor, (r.x1 + m) / factor, (r.y1 + m) / factor};
}

}  // namespace

json BaselineParams::to_json() const {
  return {{"score_floor", score_floor},       {"nms_threshold", nms_threshold},
          {"containment", containment},       {"detect_height_px", detect_height_px},
          {"context", context},               {"classify_floor", classify_floor},
          {"temperature", temperature},       {"feature_size", feature_size}};
}

BaselineParams BaselineParams::from_json(const json& j) {
  BaselineParams p;
  p.score_floor = j.value("score_floor", p.score_floor);
  p.nms_threshold = j.value("nms_threshold", p.nms_threshold);
  p.containment = j.value("containment", p.containment);
  p.detect_height_px = j.value("detect_height_px", p.detect_height_px);
  p.context = j.value("context", p.context);
  p.classify_floor = j.value("classify_floor", p.classify_floor);
  p.temperature = j.value("temperature", p.temperature);
  p.feature_size = j.value("feature_size", p.feature_size);
  if (p.temperature <= 0.0 || p.feature_size < 4 || p.detect_height_px < 4.0)
    throw ValidationError("baseline params: temperature > 0, feature_size >= 4, detect_height_px >= 4");
  return p;
}

const ClassTemplate* TemplateSet::find(std::string_view name) const {
  auto it = std::find_if(templates.begin(), templates.end(),
                         [&](const ClassTemplate& t) { return t.class_name == name; });
  return it == templates.end() ? nullptr : &*it;
}

json TemplateSet::to_json() const {
  json tpls = json::array();
  for (const auto& t : templates) {
    tpls.push_back({{"class_name", t.class_name},
                    {"samples", t.samples},
                    {"box_w_px", t.box_w_px},
                    {"box_h_px", t.box_h_px},
                    {"detect_patch", image_json(t.detect_patch)},
                    {"classify_patch", image_json(t.classify_patch)}});
  }
  return {{"format", "sealread-templates"},
          {"format_version", 1},
          {"downsample", downsample},
          {"norm_radius", norm_radius},
          {"params", params.to_json()},
          {"classes", classes},
          {"templates", std::move(tpls)}};
}

TemplateSet TemplateSet::from_json(const json& j) {
  try {
    TemplateSet t;
    t.downsample = j.at("downsample").get<int>();
    t.norm_radius = j.at("norm_radius").get<int>();
    t.params = BaselineParams::from_json(j.at("params"));
    t.classes = j.at("classes").get<std::vector<std::string>>();
    if (t.classes.empty() || t.classes.back() != kNonCharacter)
      throw ValidationError("templates: class list must end with NON_CHARACTER");
    for (const auto& jt : j.at("templates")) {
      t.templates.push_back({jt.at("class_name").get<std::string>(), jt.at("samples").get<int>(),
                             jt.at("box_w_px").get<double>(), jt.at("box_h_px").get<double>(),
                             image_from_json(jt.at("detect_patch")),
                             image_from_json(jt.at("classify_patch"))});
    }
    return t;
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("templates: {}", e.what()));
  }
}

void TemplateSet::save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(dir / "templates.json");
  if (!out) throw RuntimeFailure(fmt::format("cannot write templates to {}", dir.string()));
  out << to_json().dump() << '\n';
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / "templates.json");
  if (!in) throw ValidationError(fmt::format("no templates.json in {}", dir.string()));
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("templates: {}", e.what()));
  }
}

Image shading_normalize(const Image& image, int radius) {
  return kernels::normalize_local_parallel(image, radius, kMinLocalStd);
}

TemplateSet build_templates(std::span<const TrainingSeal> training,
                            const std::vector<std::string>& subset, double crop_pad,
                            int crop_size, const BaselineParams& params) {
  if (subset.empty() || subset.back() != kNonCharacter)
    throw ValidationError("build_templates: subset must end with NON_CHARACTER");
  TemplateSet t;
  t.params = params;
  t.classes = subset;

  struct Acc {
    std::vector<std::pair<std::size_t, std::size_t>> members;  // (seal, char)
    double w = 0.0, h = 0.0;
  };
  std::map<std::string, Acc> acc;
  for (std::size_t c = 0; c + 1 < subset.size(); ++c) acc[subset[c]];
  std::vector<double> heights;
  for (std::size_t s = 0; s < training.size(); ++s) {
    const auto& seal = *training[s].seal;
    for (std::size_t i = 0; i < seal.chars.size(); ++i) {
      const auto& ch = seal.chars[i];
      if (ch.class_name == kNonCharacter) continue;
      heights.push_back(ch.bbox.h * seal.image_h);
      auto it = acc.find(ch.class_name);
      if (it == acc.end()) continue;
      it->second.members.emplace_back(s, i);
      it->second.w += ch.bbox.w * seal.image_w;
      it->second.h += ch.bbox.h * seal.image_h;
    }
  }
  if (heights.empty()) throw ValidationError("build_templates: no training characters");
  std::nth_element(heights.begin(), heights.begin() + heights.size() / 2, heights.end());
  const double median_h = heights[heights.size() / 2];
  t.downsample = std::max(1, static_cast<int>(std::lround(median_h / params.detect_height_px)));
  t.norm_radius = std::max(2, static_cast<int>(std::lround(median_h / t.downsample)));

  std::map<std::string, ClassTemplate> built;
  for (auto& [name, a] : acc) {
    if (a.members.empty()) continue;
    const double n = static_cast<double>(a.members.size());
    ClassTemplate ct;
    ct.class_name = name;
    ct.samples = static_cast<int>(a.members.size());
    ct.box_w_px = a.w / n;
    ct.box_h_px = a.h / n;
    const double m = params.context * std::max(ct.box_w_px, ct.box_h_px);
    const int tw = std::max(3, static_cast<int>(std::lround((ct.box_w_px + 2 * m) / t.downsample)));
    const int th = std::max(3, static_cast<int>(std::lround((ct.box_h_px + 2 * m) / t.downsample)));
    ct.detect_patch = Image(tw, th, 0.0f);
    ct.classify_patch = Image(params.feature_size, params.feature_size, 0.0f);
    built.emplace(name, std::move(ct));
  }

  for (std::size_t s = 0; s < training.size(); ++s) {
    const auto& seal = *training[s].seal;
    const auto& image = *training[s].image;
    const Image z = shading_normalize(downsample(image, t.downsample), t.norm_radius);
    for (const auto& ch : seal.chars) {
      auto it = built.find(ch.class_name);
      if (it == built.end()) continue;
      auto& ct = it->second;
      const auto region = context_region(ch.bbox, seal.image_w, seal.image_h, params.context,
                                         t.downsample);
      accumulate(ct.detect_patch,
                 resample(z, region, ct.detect_patch.width(), ct.detect_patch.height()));
      if (auto crop = crop_box(image, ch.bbox, crop_pad, crop_size))
        accumulate(ct.classify_patch, resize(*crop, params.feature_size, params.feature_size));
    }
  }
  for (auto& [name, ct] : built) {
    scale(ct.detect_patch, 1.0f / static_cast<float>(ct.samples));
    scale(ct.classify_patch, 1.0f / static_cast<float>(ct.samples));
  }
  // Keep subset order.
  for (const auto& name : subset) {
    if (auto it = built.find(name); it != built.end()) t.templates.push_back(std::move(it->second));
  }
  return t;
}

std::vector<Detection> baseline_detect(const Image& image, const TemplateSet& templates,
                                       double score_floor, double nms_threshold) {
  if (templates.templates.empty()) throw ValidationError("baseline_detect: no templates");
  const int f = templates.downsample;
  const Image z = shading_normalize(downsample(image, f), templates.norm_radius);
  const int w = z.width();
  const int h = z.height();

  struct Best {
    float score = -std::numeric_limits<float>::infinity();
    double cx = 0, cy = 0, bw = 0, bh = 0;
  };
  std::vector<Best> best(static_cast<std::size_t>(w) * h);
  for (const auto& tpl : templates.templates) {
    for (double s : kPyramidScales) {
      const int tw = std::max(3, static_cast<int>(std::lround(tpl.detect_patch.width() * s)));
      const int th = std::max(3, static_cast<int>(std::lround(tpl.detect_patch.height() * s)));
      const auto t = kernels::Template::from_patch(resize(tpl.detect_patch, tw, th));
      const auto map = kernels::ncc_parallel(z, t);
      for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
          const float v = map.at(x, y);
          const double cx = x + 0.5 * tw;
          const double cy = y + 0.5 * th;
          auto& b = best[static_cast<std::size_t>(cy) * w + static_cast<std::size_t>(cx)];
          if (v > b.score) b = {v, cx, cy, tpl.box_w_px * s, tpl.box_h_px * s};
        }
      }
    }
  }

  std::vector<Detection> candidates;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto& b = best[static_cast<std::size_t>(y) * w + x];
      if (b.score < score_floor) continue;
      bool peak = true;
      for (int dy = -1; dy <= 1 && peak; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const auto& o = best[static_cast<std::size_t>(ny) * w + nx];
          // Plateaus resolve to their first pixel in scan order.
          const bool earlier = ny < y || (ny == y && nx < x);
          if (o.score > b.score || (earlier && o.score == b.score)) {
            peak = false;
            break;
          }
        }
      }
      if (!peak) continue;
      const double cx = b.cx * f;
      const double cy = b.cy * f;
      const double x0 = std::max(0.0, cx - 0.5 * b.bw);
      const double y0 = std::max(0.0, cy - 0.5 * b.bh);
      const double x1 = std::min<double>(image.width(), cx + 0.5 * b.bw);
      const double y1 = std::min<double>(image.height(), cy + 0.5 * b.bh);
      if (x1 <= x0 || y1 <= y0) continue;
      candidates.push_back({from_pixels({x0, y0, x1, y1}, image.width(), image.height()),
                            std::clamp(static_cast<double>(b.score), 0.0, 1.0)});
    }
  }

  auto kept = nms(std::move(candidates), nms_threshold);
  std::vector<Detection> out;
  for (const auto& d : kept) {
    const bool inside = std::any_of(out.begin(), out.end(), [&](const Detection& k) {
      return intersection_area(k.bbox, d.bbox) > templates.params.containment * d.bbox.area();
    });
    if (!inside) out.push_back(d);
  }
  return out;
}

std::vector<Detection> BaselineDetector::detect(const Image& image, const InferenceContext&) {
  return baseline_detect(image, t_, t_.params.score_floor, t_.params.nms_threshold);
}

BaselineClassifier::BaselineClassifier(const TemplateSet& t) : t_(t) {
  for (const auto& name : t_.classes) {
    const auto* tpl = t_.find(name);
    normalized_.push_back(tpl ? kernels::Template::from_patch(tpl->classify_patch).values
                              : std::vector<float>{});
  }
}

ClassScores BaselineClassifier::classify(const Image& crop, const BBox&, const InferenceContext&) {
  const auto& p = t_.params;
  const auto feat = kernels::Template::from_patch(resize(crop, p.feature_size, p.feature_size));
  std::vector<double> logits(t_.classes.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < t_.classes.size(); ++i) {
    const auto& tpl = normalized_[i];
    if (tpl.size() != feat.values.size()) continue;
    double r = 0.0;
    for (std::size_t k = 0; k < tpl.size(); ++k) r += double(feat.values[k]) * tpl[k];
    logits[i] = r;
  }
  logits.back() = p.classify_floor;
  const double mx = *std::max_element(logits.begin(), logits.end());
  ClassScores s;
  s.scores.resize(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    s.scores[i] = std::isinf(logits[i]) ? 0.0 : std::exp((logits[i] - mx) / p.temperature);
    z += s.scores[i];
  }
  for (auto& v : s.scores) v /= z;
  return s;
}

}  // namespace sealread
