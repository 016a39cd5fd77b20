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
#include <numbers>
#include <vector>

#include "sealread/kernels.hpp"

namespace sealread::kernels::detail {

// Summed-area tables of v and v^2 with a zero first row/column.
struct Integral {
  int width = 0;
  int height = 0;
  std::vector<double> sum;
  std::vector<double> sq;

  explicit Integral(const Image& img) : width(img.width() + 1), height(img.height() + 1) {
    sum.assign(static_cast<std::size_t>(width) * height, 0.0);
    sq.assign(sum.size(), 0.0);
    for (int y = 1; y < height; ++y) {
      double row = 0.0;
      double row2 = 0.0;
      for (int x = 1; x < width; ++x) {
        const double v = img.at(x - 1, y - 1);
        row += v;
        row2 += v * v;
        sum[idx(x, y)] = sum[idx(x, y - 1)] + row;
        sq[idx(x, y)] = sq[idx(x, y - 1)] + row2;
      }
    }
  }

  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }

  // Sums over [x0, x1) x [y0, y1).
  double box_sum(int x0, int y0, int x1, int y1) const {
    return sum[idx(x1, y1)] - sum[idx(x0, y1)] - sum[idx(x1, y0)] + sum[idx(x0, y0)];
  }
  double box_sq(int x0, int y0, int x1, int y1) const {
    return sq[idx(x1, y1)] - sq[idx(x0, y1)] - sq[idx(x1, y0)] + sq[idx(x0, y0)];
  }
};

inline constexpr double kMinWindowVariance = 1e-6;

inline float ncc_at(const Image& image, const Template& t, const Integral& ii, int x, int y) {
  const int n = t.width * t.height;
  const double s = ii.box_sum(x, y, x + t.width, y + t.height);
  const double s2 = ii.box_sq(x, y, x + t.width, y + t.height);
  const double var = s2 - s * s / n;
  if (var <= kMinWindowVariance * n) return 0.0f;
  double dot = 0.0;
  for (int ty = 0; ty < t.height; ++ty) {
    const float* row = &image.pixels()[static_cast<std::size_t>(y + ty) * image.width() + x];
    const float* trow = &t.values[static_cast<std::size_t>(ty) * t.width];
    float acc = 0.0f;
    for (int tx = 0; tx < t.width; ++tx) acc += trow[tx] * row[tx];
    dot += acc;
  }
  return static_cast<float>(std::clamp(dot / std::sqrt(var), -1.0, 1.0));
}

inline float normalize_at(const Image& image, const Integral& ii, int radius, float min_std, int x,
                          int y) {
  const int x0 = std::max(0, x - radius);
  const int y0 = std::max(0, y - radius);
  const int x1 = std::min(image.width(), x + radius + 1);
  const int y1 = std::min(image.height(), y + radius + 1);
  const double n = double(x1 - x0) * (y1 - y0);
  const double mean = ii.box_sum(x0, y0, x1, y1) / n;
  const double var = std::max(0.0, ii.box_sq(x0, y0, x1, y1) / n - mean * mean);
  const double sd = std::max<double>(std::sqrt(var), min_std);
  return static_cast<float>((image.at(x, y) - mean) / sd);
}

struct LightVector {
  double x, y, z;
  explicit LightVector(const LightParams& p) {
    const double az = p.azimuth_deg * std::numbers::pi / 180.0;
    const double el = p.elevation_deg * std::numbers::pi / 180.0;
    x = std::cos(el) * std::cos(az);
    y = std::cos(el) * std::sin(az);
    z = std::sin(el);
  }
};

inline float shade_at(const Image& h, const LightVector& l, int x, int y) {
  const double gx = 0.5 * (h.at_clamped(x + 1, y) - h.at_clamped(x - 1, y));
  const double gy = 0.5 * (h.at_clamped(x, y + 1) - h.at_clamped(x, y - 1));
  const double norm = std::sqrt(gx * gx + gy * gy + 1.0);
  const double ndotl = (-gx * l.x - gy * l.y + l.z) / norm;
  return static_cast<float>(std::max(0.0, ndotl) / l.z);
}

}  // namespace sealread::kernels::detail
