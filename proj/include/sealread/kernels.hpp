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

#include <vector>

#include "sealread/image.hpp"

// Data-parallel image kernels. Each kernel has a serial reference and an
// OpenMP version; both produce bit-identical output (rows are independent and
// every output value is computed with the same operation order).

namespace sealread::kernels {

/// Zero-mean, unit-L2-norm correlation template.
struct Template {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  /// Normalizes `patch`; a constant patch yields an all-zero template.
  static Template from_patch(const Image& patch);
  bool degenerate() const;
};

/// Normalized cross-correlation over valid placements. Entry (x, y) is the
/// score with the template's top-left corner at image pixel (x, y); the map
/// is (W - tw + 1) x (H - th + 1), or empty when the template does not fit.
/// Windows with (near) zero variance score 0.
struct ScoreMap {
  int width = 0;
  int height = 0;
  std::vector<float> score;
  float at(int x, int y) const { return score[static_cast<std::size_t>(y) * width + x]; }
};

ScoreMap ncc_serial(const Image& image, const Template& t);
ScoreMap ncc_parallel(const Image& image, const Template& t);

/// (I - local mean) / max(local std, min_std) over a (2r+1)^2 window.
Image normalize_local_serial(const Image& image, int radius, float min_std);
Image normalize_local_parallel(const Image& image, int radius, float min_std);

struct LightParams {
  double azimuth_deg = 135.0;
  double elevation_deg = 45.0;
};

/// Lambertian shading factor of a height field lit by one directional light,
/// normalized so a flat surface gives exactly 1.
Image shade_serial(const Image& height, const LightParams& light);
Image shade_parallel(const Image& height, const LightParams& light);

}  // namespace sealread::kernels
