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

#include <memory>
#include <string>
#include <vector>

#include "sealread/corpus.hpp"
#include "sealread/geometry.hpp"
#include "sealread/image.hpp"

namespace sealread {

struct Detection {
  BBox bbox;
  double confidence = 0.0;

  bool operator==(const Detection&) const = default;
};

/// Score distribution over the active classification subset, in subset order.
struct ClassScores {
  std::vector<double> scores;

  /// Highest score; ties go to the lower index.
  std::size_t argmax() const;
  /// Throws BackendError unless the vector has `n` finite nonnegative
  /// entries summing to 1 within 1e-6.
  void validate(std::size_t n) const;

  bool operator==(const ClassScores&) const = default;
};

struct LabeledDetection {
  Detection detection;
  ClassScores scores;
};

/// Optional side information for a call. Real models ignore it; the
/// ground-truth oracle backend reads the seal annotation.
struct InferenceContext {
  const SealAnnotation* seal = nullptr;
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Detection> detect(const Image& image, const InferenceContext& ctx) = 0;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  /// Class names in score order; the last one is NON_CHARACTER.
  virtual const std::vector<std::string>& classes() const = 0;
  virtual ClassScores classify(const Image& crop, const BBox& box, const InferenceContext& ctx) = 0;
};

/// Greedy non-maximum suppression: visit by descending confidence (ties by
/// cx, then cy), keep a box unless its IoU with an already kept box exceeds
/// the threshold. Output is in visiting order.
std::vector<Detection> nms(std::vector<Detection> candidates, double iou_threshold);

/// Runs the model, then enforces the detection contract: confidences in
/// [0, 1], sorted descending, no surviving pair above nms_threshold.
std::vector<Detection> detect(Detector& model, const Image& image, double nms_threshold,
                              const InferenceContext& ctx = {});

/// Runs the model on an out_size x out_size crop and validates the scores.
ClassScores classify(Classifier& model, const Image& crop, int out_size, const BBox& box = {},
                     const InferenceContext& ctx = {});

// Closed-form backends used to validate the harness wiring.

/// Returns the seal's ground-truth character boxes with confidence 1.
class OracleDetector final : public Detector {
 public:
  std::vector<Detection> detect(const Image& image, const InferenceContext& ctx) override;
};

/// One-hot on the class of the ground-truth box that best overlaps `box`
/// (NON_CHARACTER when none reaches IoU 0.5 or the class is not in the subset).
class OracleClassifier final : public Classifier {
 public:
  explicit OracleClassifier(std::vector<std::string> classes) : classes_(std::move(classes)) {}
  const std::vector<std::string>& classes() const override { return classes_; }
  ClassScores classify(const Image& crop, const BBox& box, const InferenceContext& ctx) override;

 private:
  std::vector<std::string> classes_;
};

/// Detects nothing.
class NullDetector final : public Detector {
 public:
  std::vector<Detection> detect(const Image&, const InferenceContext&) override { return {}; }
};

/// Puts all mass on NON_CHARACTER.
class NullClassifier final : public Classifier {
 public:
  explicit NullClassifier(std::vector<std::string> classes) : classes_(std::move(classes)) {}
  const std::vector<std::string>& classes() const override { return classes_; }
  ClassScores classify(const Image&, const BBox&, const InferenceContext&) override {
    ClassScores s;
    s.scores.assign(classes_.size(), 0.0);
    s.scores.back() = 1.0;
    return s;
  }

 private:
  std::vector<std::string> classes_;
};

}  // namespace sealread
