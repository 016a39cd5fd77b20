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

#include "sealread/infer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "sealread/error.hpp"

namespace sealread {

std::size_t ClassScores::argmax() const {
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

void ClassScores::validate(std::size_t n) const {
  if (scores.size() != n)
    throw BackendError(fmt::format("class scores: expected {} entries, got {}", n, scores.size()));
  double sum = 0.0;
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0) throw BackendError("class scores: negative or non-finite entry");
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw BackendError(fmt::format("class scores: sum is {}, expected 1", sum));
}

std::vector<Detection> detect(Detector& model, const Image& image, double nms_threshold,
                              const InferenceContext& ctx) {
  if (image.empty()) throw ValidationError("detect: empty image");
  auto raw = model.detect(image, ctx);
  for (const auto& d : raw) {
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0))
      throw BackendError(fmt::format("detect: confidence {} outside [0, 1]", d.confidence));
    if (!is_valid(d.bbox)) throw BackendError("detect: invalid box from model");
  }
  return nms(std::move(raw), nms_threshold);
}

ClassScores classify(Classifier& model, const Image& crop, int out_size, const BBox& box,
                     const InferenceContext& ctx) {
  if (crop.width() != out_size || crop.height() != out_size)
    throw ValidationError(fmt::format("classify: crop is {}x{}, expected {}x{}", crop.width(),
                                      crop.height(), out_size, out_size));
  auto scores = model.classify(crop, box, ctx);
  scores.validate(model.classes().size());
  return scores;
}

std::vector<Detection> OracleDetector::detect(const Image&, const InferenceContext& ctx) {
  if (!ctx.seal) throw BackendError("oracle detector needs the seal annotation");
  std::vector<Detection> out;
  for (const auto& c : ctx.seal->chars) {
    if (c.class_name != kNonCharacter) out.push_back({c.bbox, 1.0});
  }
  return out;
}

ClassScores OracleClassifier::classify(const Image&, const BBox& box, const InferenceContext& ctx) {
  if (!ctx.seal) throw BackendError("oracle classifier needs the seal annotation");
  ClassScores s;
  s.scores.assign(classes_.size(), 0.0);
  double best = 0.0;
  const CharBox* match = nullptr;
  for (const auto& c : ctx.seal->chars) {
    const double v = iou(c.bbox, box);
    if (v >= 0.5 && (!match || v > best)) {
      best = v;
      match = &c;
    }
  }
  std::size_t idx = classes_.size() - 1;
  if (match) {
    auto it = std::find(classes_.begin(), classes_.end(), match->class_name);
    if (it != classes_.end()) idx = static_cast<std::size_t>(it - classes_.begin());
  }
  s.scores[idx] = 1.0;
  return s;
}

}  // namespace sealread
