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

#include "kernels_common.hpp"

namespace sealread::kernels {

Template Template::from_patch(const Image& patch) {
  Template t;
  t.width = patch.width();
  t.height = patch.height();
  const auto px = patch.pixels();
  t.values.assign(px.begin(), px.end());
  if (t.values.empty()) return t;
  const double mean =
      std::accumulate(t.values.begin(), t.values.end(), 0.0) / static_cast<double>(t.values.size());
  double norm2 = 0.0;
  for (auto& v : t.values) {
    v = static_cast<float>(v - mean);
    norm2 += double(v) * v;
  }
  if (norm2 <= detail::kMinWindowVariance * t.values.size()) {
    std::fill(t.values.begin(), t.values.end(), 0.0f);
    return t;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : t.values) v = static_cast<float>(v * inv);
  return t;
}

bool Template::degenerate() const {
  return values.empty() ||
         std::all_of(values.begin(), values.end(), [](float v) { return v == 0.0f; });
}

ScoreMap ncc_serial(const Image& image, const Template& t) {
  ScoreMap m;
  if (t.width > image.width() || t.height > image.height() || t.values.empty()) return m;
  m.width = image.width() - t.width + 1;
  m.height = image.height() - t.height + 1;
  m.score.assign(static_cast<std::size_t>(m.width) * m.height, 0.0f);
  if (t.degenerate()) return m;
  const detail::Integral ii(image);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x)
      m.score[static_cast<std::size_t>(y) * m.width + x] = detail::ncc_at(image, t, ii, x, y);
  return m;
}

Image normalize_local_serial(const Image& image, int radius, float min_std) {
  Image out(image.width(), image.height());
  const detail::Integral ii(image);
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      out.at(x, y) = detail::normalize_at(image, ii, radius, min_std, x, y);
  return out;
}

Image shade_serial(const Image& height, const LightParams& light) {
  Image out(height.width(), height.height());
  const detail::LightVector l(light);
  for (int y = 0; y < height.height(); ++y)
    for (int x = 0; x < height.width(); ++x) out.at(x, y) = detail::shade_at(height, l, x, y);
  return out;
}

}  // namespace sealread::kernels
