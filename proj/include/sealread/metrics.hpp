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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sealread/geometry.hpp"
#include "sealread/infer.hpp"

namespace sealread {

// ---- detection

struct MatchPair {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double iou = 0.0;

  bool operator==(const MatchPair&) const = default;
};

struct MatchResult {
  std::vector<MatchPair> pairs;  // in matching (confidence) order
  std::vector<std::size_t> unmatched_preds;
  std::vector<std::size_t> unmatched_gts;
};

/// Greedy by descending confidence (ties: lower pred index first). Each pred
/// takes the unmatched gt of highest IoU (ties: lower gt index) when that IoU
/// is >= iou_threshold.
MatchResult match_detections(std::span<const Detection> preds, std::span<const BBox> gts,
                             double iou_threshold);

/// Predictions and ground truth of one image.
struct ImageDetections {
  std::vector<Detection> preds;
  std::vector<BBox> gts;
};

struct PRPoint {
  double confidence = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

struct PRCurve {
  std::vector<PRPoint> points;  // by descending confidence
  std::size_t n_gt = 0;
};

/// Pooled over images: matches are per image, ranking is global.
PRCurve pr_curve(std::span<const ImageDetections> images, double iou_threshold);

/// All-point interpolated AP. Throws ValidationError when there is no gt.
double average_precision(const PRCurve& curve);
double average_precision(std::span<const ImageDetections> images, double iou_threshold);
double average_precision(std::span<const Detection> preds, std::span<const BBox> gts,
                         double iou_threshold);

std::vector<double> coco_thresholds();  // 0.50, 0.55, ..., 0.95

struct MapResult {
  double map50 = 0.0;
  double map5095 = 0.0;
};

MapResult map_range(std::span<const ImageDetections> images,
                    std::span<const double> thresholds = {});
MapResult map_range(std::span<const Detection> preds, std::span<const BBox> gts,
                    std::span<const double> thresholds = {});

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0;
};

/// Operating point over detections with confidence >= conf_threshold.
/// Precision with no predictions is taken as 1 when there is no gt, else 0.
PrecisionRecall precision_recall(std::span<const ImageDetections> images, double iou_threshold,
                                 double conf_threshold);

// ---- classification

/// Fraction of samples whose label is among the k best scores; equal scores
/// rank by ascending class index.
double topk_accuracy(std::span<const ClassScores> scores, std::span<const std::size_t> labels,
                     int k);

struct ConfusionMatrix {
  std::size_t n = 0;
  std::vector<std::int64_t> counts;  // row = true, column = predicted

  std::int64_t at(std::size_t truth, std::size_t pred) const { return counts[truth * n + pred]; }
  std::int64_t total() const;
};

struct ClassificationSummary {
  ConfusionMatrix confusion;
  std::vector<double> f1;       // per class; 0 for classes without support
  std::vector<double> recall;   // per class
  std::vector<std::size_t> excluded;  // classes without support
  double macro_f1 = 0.0;
  double per_class_mean_acc = 0.0;
};

ClassificationSummary confusion_and_f1(std::span<const ClassScores> scores,
                                       std::span<const std::size_t> labels, std::size_t n_classes);

/// Rows count how often the true class appears among the k best; a top-k hit
/// lands on the diagonal, a miss on the top-1 prediction.
ConfusionMatrix topk_confusion(std::span<const ClassScores> scores,
                               std::span<const std::size_t> labels, std::size_t n_classes, int k);

// ---- edit distance

struct EditCounts {
  std::size_t S = 0, D = 0, I = 0, N = 0;

  std::size_t total() const { return S + D + I; }
  bool operator==(const EditCounts&) const = default;
};

namespace detail {
EditCounts levenshtein_ids(std::span<const std::size_t> pred, std::span<const std::size_t> gt);
}

/// Edits turning `pred` into `gt`: D deletes pred symbols, I inserts gt
/// symbols. Among minimal edit scripts the one with fewest indels wins, which
/// makes the counts unique.
template <class Seq>
EditCounts levenshtein(const Seq& pred, const Seq& gt) {
  // Map symbols to dense ids so the DP works on any equality-comparable type.
  std::vector<typename Seq::value_type> symbols;
  auto id_of = [&](const auto& v) {
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i] == v) return i;
    symbols.push_back(v);
    return symbols.size() - 1;
  };
  std::vector<std::size_t> a, b;
  for (const auto& v : pred) a.push_back(id_of(v));
  for (const auto& v : gt) b.push_back(id_of(v));
  return detail::levenshtein_ids(a, b);
}

/// (S + D + I) / N; throws ValidationError on empty gt.
double cer(const EditCounts& e);

template <class Seq>
double cer(const Seq& pred, const Seq& gt) {
  return cer(levenshtein(pred, gt));
}

// ---- aggregation

/// Unweighted mean; throws ValidationError on empty input.
double mean(std::span<const double> values);
double round_to(double value, int decimals);

}  // namespace sealread
