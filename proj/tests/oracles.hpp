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

// Slow, independent reference implementations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "sealread/geometry.hpp"
#include "sealread/infer.hpp"
#include "sealread/metrics.hpp"

namespace oracle {

using sealread::BBox;
using sealread::Detection;

// Exact area of a ∩ b by coordinate compression: split the plane at every
// box edge and add up the cells covered by both boxes.
inline double overlap_area(const BBox& a, const BBox& b) {
  std::vector<double> xs{a.left(), a.right(), b.left(), b.right()};
  std::vector<double> ys{a.top(), a.bottom(), b.top(), b.bottom()};
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  auto inside = [](const BBox& r, double x, double y) {
    return x > r.left() && x < r.right() && y > r.top() && y < r.bottom();
  };
  double area = 0.0;
  for (int i = 0; i + 1 < 4; ++i)
    for (int j = 0; j + 1 < 4; ++j) {
      const double mx = 0.5 * (xs[i] + xs[i + 1]), my = 0.5 * (ys[j] + ys[j + 1]);
      if (inside(a, mx, my) && inside(b, mx, my)) area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
    }
  return area;
}

inline double iou(const BBox& a, const BBox& b) {
  const double inter = overlap_area(a, b);
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0 ? inter / uni : 0.0;
}

inline std::vector<std::size_t> confidence_order(const std::vector<Detection>& preds) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].confidence > preds[b].confidence;
  });
  return order;
}

// Exhaustive search over partial one-to-one assignments (preds in confidence
// order); the winner maximizes, pred by pred, (matched, iou, -gt index).
// Returns the gt assigned to each pred.
inline std::vector<std::optional<std::size_t>> match(const std::vector<Detection>& preds,
                                                     const std::vector<BBox>& gts, double thr) {
  const auto order = confidence_order(preds);
  using Key = std::vector<std::tuple<int, double, long>>;
  Key best_key;
  std::vector<std::optional<std::size_t>> best(preds.size()), cur(preds.size());
  Key key;
  std::vector<char> used(gts.size(), 0);
  bool have = false;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == order.size()) {
      if (!have || key > best_key) best_key = key, best = cur, have = true;
      return;
    }
    const auto p = order[k];
    key.emplace_back(0, 0.0, 0);
    cur[p].reset();
    self(self, k + 1);
    key.pop_back();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g]) continue;
      const double v = oracle::iou(preds[p].bbox, gts[g]);
      if (v < thr) continue;
      used[g] = 1;
      cur[p] = g;
      key.emplace_back(1, v, -static_cast<long>(g));
      self(self, k + 1);
      key.pop_back();
      cur[p].reset();
      used[g] = 0;
    }
  };
  rec(rec, 0);
  return best;
}

// AP by sweeping every confidence cutoff and re-matching the kept prefix.
inline double average_precision(const std::vector<Detection>& preds, const std::vector<BBox>& gts,
                                double thr) {
  const auto order = confidence_order(preds);
  std::vector<double> rec, prec;
  for (std::size_t k = 1; k <= order.size(); ++k) {
    std::vector<Detection> kept;
    for (std::size_t i = 0; i < k; ++i) kept.push_back(preds[order[i]]);
    const auto m = match(kept, gts, thr);
    const auto tp = static_cast<double>(std::count_if(m.begin(), m.end(), [](auto& o) { return o.has_value(); }));
    rec.push_back(tp / gts.size());
    prec.push_back(tp / k);
  }
  std::set<double> levels(rec.begin(), rec.end());
  double ap = 0.0, prev = 0.0;
  for (double r : levels) {
    if (r <= 0.0) continue;
    double p = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i)
      if (rec[i] >= r) p = std::max(p, prec[i]);
    ap += (r - prev) * p;
    prev = r;
  }
  return ap;
}

// Every alignment of pred against gt, with branch-and-bound on the edit count.
// Best = fewest edits, then fewest indels.
inline sealread::EditCounts levenshtein(const std::vector<int>& a, const std::vector<int>& b) {
  sealread::EditCounts best;
  std::size_t best_e = SIZE_MAX, best_x = SIZE_MAX;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j, std::size_t s, std::size_t d,
                 std::size_t ins) -> void {
    const std::size_t e = s + d + ins;
    const std::size_t ri = a.size() - i, rj = b.size() - j;
    const std::size_t bound = e + (ri > rj ? ri - rj : rj - ri);
    if (bound > best_e) return;
    if (ri == 0 && rj == 0) {
      if (e < best_e || (e == best_e && d + ins < best_x)) {
        best_e = e, best_x = d + ins;
        best = {s, d, ins, b.size()};
      }
      return;
    }
    if (ri && rj) self(self, i + 1, j + 1, s + (a[i] != b[j]), d, ins);
    if (ri) self(self, i + 1, j, s, d + 1, ins);
    if (rj) self(self, i, j + 1, s, d, ins + 1);
  };
  rec(rec, 0, 0, 0, 0, 0);
  best.N = b.size();
  return best;
}

// Line grouping by exhaustive search over set partitions. A block of two or
// more boxes is a valid line when some direction within the angle range
// (scanned in 0.05 degree steps) keeps every center inside the proximity band
// of a common line. Winner: fewest blocks, then smallest summed squared
// deviation along the best direction of each block.
inline std::set<std::set<std::size_t>> line_partition(const std::vector<BBox>& boxes,
                                                      double max_angle_deg, double proximity_factor) {
  std::vector<double> hs;
  for (const auto& b : boxes) hs.push_back(b.h);
  std::sort(hs.begin(), hs.end());
  const double band = proximity_factor * hs[hs.size() / 2];
  const std::size_t n = boxes.size();

  // residual per subset bitmask, negative when the subset is not a line
  std::vector<double> cost(std::size_t{1} << n, -1.0);
  for (std::size_t mask = 1; mask < cost.size(); ++mask) {
    if ((mask & (mask - 1)) == 0) {
      cost[mask] = 0.0;
      continue;
    }
    for (int step = -static_cast<int>(max_angle_deg * 20); step <= max_angle_deg * 20; ++step) {
      const double a = step * 0.05 * M_PI / 180.0;
      const double nx = -std::sin(a), ny = std::cos(a);
      double lo = 1e9, hi = -1e9, sum = 0, sq = 0;
      int m = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (mask >> k & 1) {
          const double d = boxes[k].cx * nx + boxes[k].cy * ny;
          lo = std::min(lo, d), hi = std::max(hi, d), sum += d, sq += d * d, ++m;
        }
      if (hi - lo > 2 * band) continue;
      const double res = sq - sum * sum / m;
      if (cost[mask] < 0 || res < cost[mask]) cost[mask] = res;
    }
  }

  std::vector<std::size_t> label(n, 0), best_label;
  std::size_t best_blocks = SIZE_MAX;
  double best_res = 0;
  auto rec = [&](auto&& self, std::size_t i, std::size_t blocks) -> void {
    if (blocks > best_blocks) return;
    if (i == n) {
      double res = 0;
      for (std::size_t b = 0; b < blocks; ++b) {
        std::size_t mask = 0;
        for (std::size_t k = 0; k < n; ++k)
          if (label[k] == b) mask |= std::size_t{1} << k;
        if (cost[mask] < 0) return;
        res += cost[mask];
      }
      if (blocks < best_blocks || res < best_res) best_blocks = blocks, best_res = res, best_label = label;
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      label[i] = b;
      self(self, i + 1, std::max(blocks, b + 1));
    }
  };
  rec(rec, 0, 0);
  std::vector<std::set<std::size_t>> groups(best_blocks);
  for (std::size_t k = 0; k < n; ++k) groups[best_label[k]].insert(k);
  return {groups.begin(), groups.end()};
}

}  // namespace oracle
