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
#include <numeric>

#include "sealread/error.hpp"
#include "sealread/metrics.hpp"

namespace sealread {

MatchResult match_detections(std::span<const Detection> preds, std::span<const BBox> gts,
                             double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0) && iou_threshold != 1.0)
    throw ValidationError("match_detections: iou threshold must be in (0, 1]");
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].confidence > preds[b].confidence;
  });
  std::vector<char> taken(gts.size(), 0);
  MatchResult r;
  for (auto p : order) {
    std::size_t best = gts.size();
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(preds[p].bbox, gts[g]);
      if (v > best_iou) best = g, best_iou = v;
    }
    if (best < gts.size() && best_iou >= iou_threshold) {
      taken[best] = 1;
      r.pairs.push_back({p, best, best_iou});
    } else {
      r.unmatched_preds.push_back(p);
    }
  }
  for (std::size_t g = 0; g < gts.size(); ++g)
    if (!taken[g]) r.unmatched_gts.push_back(g);
  std::sort(r.unmatched_preds.begin(), r.unmatched_preds.end());
  return r;
}

PRCurve pr_curve(std::span<const ImageDetections> images, double iou_threshold) {
  struct Ranked {
    double conf;
    std::size_t image, pred;
    bool tp;
  };
  std::vector<Ranked> ranked;
  PRCurve curve;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& im = images[i];
    curve.n_gt += im.gts.size();
    const auto m = match_detections(im.preds, im.gts, iou_threshold);
    std::vector<char> tp(im.preds.size(), 0);
    for (const auto& p : m.pairs) tp[p.pred] = 1;
    for (std::size_t p = 0; p < im.preds.size(); ++p)
      ranked.push_back({im.preds[p].confidence, i, p, tp[p] != 0});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.conf != b.conf) return a.conf > b.conf;
    if (a.image != b.image) return a.image < b.image;
    return a.pred < b.pred;
  });
  std::size_t tp = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    tp += ranked[k].tp;
    curve.points.push_back({ranked[k].conf,
                            curve.n_gt ? double(tp) / double(curve.n_gt) : 0.0,
                            double(tp) / double(k + 1)});
  }
  return curve;
}

double average_precision(const PRCurve& curve) {
  if (curve.n_gt == 0) throw ValidationError("average precision is undefined without ground truth");
  const auto& pts = curve.points;
  // Precision envelope from the right, then area over recall steps.
  std::vector<double> env(pts.size());
  double run = 0.0;
  for (std::size_t k = pts.size(); k-- > 0;) {
    run = std::max(run, pts[k].precision);
    env[k] = run;
  }
  double ap = 0.0, prev_recall = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].recall > prev_recall) {
      ap += (pts[k].recall - prev_recall) * env[k];
      prev_recall = pts[k].recall;
    }
  }
  return ap;
}

double average_precision(std::span<const ImageDetections> images, double iou_threshold) {
  return average_precision(pr_curve(images, iou_threshold));
}

double average_precision(std::span<const Detection> preds, std::span<const BBox> gts,
                         double iou_threshold) {
  const ImageDetections one{{preds.begin(), preds.end()}, {gts.begin(), gts.end()}};
  return average_precision(std::span(&one, 1), iou_threshold);
}

std::vector<double> coco_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back((50 + 5 * i) / 100.0);
  return t;
}

MapResult map_range(std::span<const ImageDetections> images, std::span<const double> thresholds) {
  const auto defaults = coco_thresholds();
  if (thresholds.empty()) thresholds = defaults;
  MapResult r;
  r.map50 = average_precision(images, 0.5);
  double sum = 0.0;
  for (double t : thresholds) sum += t == 0.5 ? r.map50 : average_precision(images, t);
  r.map5095 = sum / static_cast<double>(thresholds.size());
  return r;
}

MapResult map_range(std::span<const Detection> preds, std::span<const BBox> gts,
                    std::span<const double> thresholds) {
  const ImageDetections one{{preds.begin(), preds.end()}, {gts.begin(), gts.end()}};
  return map_range(std::span(&one, 1), thresholds);
}

PrecisionRecall precision_recall(std::span<const ImageDetections> images, double iou_threshold,
                                 double conf_threshold) {
  PrecisionRecall r;
  for (const auto& im : images) {
    std::vector<Detection> kept;
    for (const auto& d : im.preds)
      if (d.confidence >= conf_threshold) kept.push_back(d);
    const auto m = match_detections(kept, im.gts, iou_threshold);
    r.tp += m.pairs.size();
    r.fp += m.unmatched_preds.size();
    r.fn += m.unmatched_gts.size();
  }
  const std::size_t n_pred = r.tp + r.fp;
  const std::size_t n_gt = r.tp + r.fn;
  r.precision = n_pred ? double(r.tp) / double(n_pred) : (n_gt ? 0.0 : 1.0);
  r.recall = n_gt ? double(r.tp) / double(n_gt) : 1.0;
  return r;
}

}  // namespace sealread
