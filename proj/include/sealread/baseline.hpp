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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sealread/corpus.hpp"
#include "sealread/image.hpp"
#include "sealread/infer.hpp"

namespace sealread {

/// Knobs of the template-matching stand-in for the neural detector and
/// classifier. Defaults were tuned on the synthetic generator.
struct BaselineParams {
  double score_floor = 0.8;    // minimum correlation for a detection candidate
  double nms_threshold = 0.45;
  double containment = 0.6;    // drop boxes this much inside a stronger box
  double detect_height_px = 14.0;  // glyph height after detection downsampling
  double context = 0.15;       // template margin, fraction of max(w, h)
  double classify_floor = 0.45;  // correlation below which NON_CHARACTER wins
  double temperature = 0.05;     // softmax temperature on correlations
  int feature_size = 32;         // classifier resolution

  nlohmann::json to_json() const;
  static BaselineParams from_json(const nlohmann::json& j);
};

inline constexpr double kPyramidScales[] = {0.8, 1.0, 1.25};

/// Per-class templates learned from training crops by pixel-wise averaging.
struct ClassTemplate {
  std::string class_name;
  int samples = 0;
  double box_w_px = 0.0;  // mean box size at full resolution
  double box_h_px = 0.0;
  Image detect_patch;     // mean shading-normalized patch incl. context margin
  Image classify_patch;   // mean crop at feature_size
};

struct TemplateSet {
  int downsample = 1;
  int norm_radius = 8;  // local normalization radius at detection scale
  BaselineParams params;
  std::vector<std::string> classes;  // classification subset, NON_CHARACTER last
  std::vector<ClassTemplate> templates;  // classes with training samples

  const ClassTemplate* find(std::string_view name) const;

  nlohmann::json to_json() const;
  static TemplateSet from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& dir) const;
  static TemplateSet load(const std::filesystem::path& dir);
};

struct TrainingSeal {
  const SealAnnotation* seal;
  const Image* image;
};

/// Builds detection and classification templates for every subset class
/// that occurs in the training seals. `subset` must end with NON_CHARACTER.
TemplateSet build_templates(std::span<const TrainingSeal> training,
                            const std::vector<std::string>& subset, double crop_pad,
                            int crop_size, const BaselineParams& params = {});

/// Local mean/variance normalization used by the detector.
Image shading_normalize(const Image& image, int radius);

/// Normalized cross-correlation of every template over a 3-level scale
/// pyramid, local maxima above score_floor, then greedy NMS and containment
/// suppression.
std::vector<Detection> baseline_detect(const Image& image, const TemplateSet& templates,
                                       double score_floor, double nms_threshold);

class BaselineDetector final : public Detector {
 public:
  explicit BaselineDetector(const TemplateSet& t) : t_(t) {}
  std::vector<Detection> detect(const Image& image, const InferenceContext&) override;

 private:
  const TemplateSet& t_;
};

/// Softmax over per-class correlations with the NON_CHARACTER logit pinned
/// at classify_floor.
class BaselineClassifier final : public Classifier {
 public:
  explicit BaselineClassifier(const TemplateSet& t);
  const std::vector<std::string>& classes() const override { return t_.classes; }
  ClassScores classify(const Image& crop, const BBox& box, const InferenceContext&) override;

 private:
  const TemplateSet& t_;
  // Zero-mean unit-norm classify patches in class order; empty when a class
  // has no template.
  std::vector<std::vector<float>> normalized_;
};

}  // namespace sealread
