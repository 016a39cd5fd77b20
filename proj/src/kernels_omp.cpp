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

#include "kernels_common.hpp"

namespace sealread::kernels {

ScoreMap ncc_parallel(const Image& image, const Template& t) {
  ScoreMap m;
  if (t.width > image.width() || t.height > image.height() || t.values.empty()) return m;
  m.width = image.width() - t.width + 1;
  m.height = image.height() - t.height + 1;
  m.score.assign(static_cast<std::size_t>(m.width) * m.height, 0.0f);
  if (t.degenerate()) return m;
  const detail::Integral ii(image);
  // plain locals: the outlined region otherwise reloads m through a pointer
  float* const out = m.score.data();
  const int w = m.width, h = m.height;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out[static_cast<std::size_t>(y) * w + x] = detail::ncc_at(image, t, ii, x, y);
  return m;
}

Image normalize_local_parallel(const Image& image, int radius, float min_std) {
  Image out(image.width(), image.height());
  const detail::Integral ii(image);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      out.at(x, y) = detail::normalize_at(image, ii, radius, min_std, x, y);
  return out;
}

Image shade_parallel(const Image& height, const LightParams& light) {
  Image out(height.width(), height.height());
  const detail::LightVector l(light);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height.height(); ++y)
    for (int x = 0; x < height.width(); ++x) out.at(x, y) = detail::shade_at(height, l, x, y);
  return out;
}

}  // namespace sealread::kernels
