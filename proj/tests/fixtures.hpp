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

#include <cmath>
#include <string>
#include <vector>

#include "sealread/geometry.hpp"
#include "sealread/infer.hpp"
#include "sealread/rng.hpp"

namespace fixture {

using sealread::BBox;
using sealread::Detection;
using sealread::Rng;

inline BBox random_box(Rng& rng) {
  const double w = sealread::uniform(rng, 0.05, 0.3), h = sealread::uniform(rng, 0.05, 0.3);
  return {sealread::uniform(rng, w / 2, 1 - w / 2), sealread::uniform(rng, h / 2, 1 - h / 2), w, h};
}

inline BBox jitter(const BBox& b, Rng& rng, double amount) {
  BBox j{b.cx + sealread::uniform(rng, -amount, amount) * b.w,
         b.cy + sealread::uniform(rng, -amount, amount) * b.h,
         b.w * sealread::uniform(rng, 1 - amount, 1 + amount),
         b.h * sealread::uniform(rng, 1 - amount, 1 + amount)};
  return j;
}

struct DetectionInstance {
  std::vector<Detection> preds;
  std::vector<BBox> gts;
};

// Up to 8 gts and 8 preds; preds are mostly jittered gts so IoUs straddle
// the thresholds, and confidences are coarse so ties happen.
inline DetectionInstance random_detection_instance(Rng& rng) {
  DetectionInstance in;
  const auto n_gt = 1 + sealread::uniform_index(rng, 6);
  for (std::size_t i = 0; i < n_gt; ++i) in.gts.push_back(random_box(rng));
  const auto n_pred = sealread::uniform_index(rng, 9);
  for (std::size_t i = 0; i < n_pred; ++i) {
    const BBox b = sealread::uniform01(rng) < 0.75
                       ? jitter(in.gts[sealread::uniform_index(rng, n_gt)], rng, 0.35)
                       : random_box(rng);
    in.preds.push_back({b, std::round(sealread::uniform01(rng) * 10) / 10});
  }
  return in;
}

inline std::vector<int> random_string(Rng& rng, std::size_t max_len, int alphabet) {
  std::vector<int> s(sealread::uniform_index(rng, max_len + 1));
  for (auto& c : s) c = static_cast<int>(sealread::uniform_index(rng, alphabet));
  return s;
}

// Rows of boxes: `rows` lines of `per_row[i]` boxes with glyph height h,
// line pitch `pitch` (x h), rotated by `deg` about (0.5, 0.5). Returns boxes
// and the row of each box.
struct RowFixture {
  std::vector<BBox> boxes;
  std::vector<int> row;
  std::vector<int> col;
};

inline RowFixture rows_fixture(const std::vector<int>& per_row, double h, double pitch, double deg,
                               Rng* rng = nullptr) {
  RowFixture f;
  const double th = deg * M_PI / 180.0;
  const double w = 0.8 * h, step = 1.1 * h;
  const double y0 = 0.5 - 0.5 * (per_row.size() - 1) * pitch * h;
  for (std::size_t r = 0; r < per_row.size(); ++r) {
    const double x0 = 0.5 - 0.5 * (per_row[r] - 1) * step;
    for (int c = 0; c < per_row[r]; ++c) {
      double x = x0 + c * step, y = y0 + r * pitch * h;
      if (rng) {
        x += sealread::uniform(*rng, -0.08, 0.08) * h;
        y += sealread::uniform(*rng, -0.08, 0.08) * h;
      }
      const double dx = x - 0.5, dy = y - 0.5;
      f.boxes.push_back({0.5 + dx * std::cos(th) - dy * std::sin(th),
                         0.5 + dx * std::sin(th) + dy * std::cos(th), w, h});
      f.row.push_back(static_cast<int>(r));
      f.col.push_back(c);
    }
  }
  return f;
}

}  // namespace fixture
