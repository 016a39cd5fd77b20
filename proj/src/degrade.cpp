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
#include <cmath>
#include <numbers>
#include <vector>

#include "sealread/rng.hpp"
#include "sealread/synthseal.hpp"

namespace sealread {

namespace {

constexpr float kSealPixelMax = 240.0f;  // brighter pixels are background
constexpr float kReliefThreshold = 10.0f;

float seal_base_level(const Image& img) {
  std::vector<float> v;
  for (float p : img.pixels())
    if (p < kSealPixelMax) v.push_back(p);
  if (v.empty()) return kSealBase;
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

std::pair<Image, SealAnnotation> degrade(const Image& image, const SealAnnotation& annotation,
                                         const DegradationParams& params, std::uint64_t seed) {
  params.validate();
  if (params.wear_fraction <= 0.0 && params.occlusion_discs == 0) return {image, annotation};

  const int w = image.width();
  const int h = image.height();
  const float base = seal_base_level(image);
  auto is_relief = [&](int x, int y) {
    const float p = image.at(x, y);
    return p < kSealPixelMax && std::abs(p - base) > kReliefThreshold;
  };

  std::vector<std::uint8_t> erased(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::vector<std::size_t>> relief(annotation.chars.size());

  for (std::size_t i = 0; i < annotation.chars.size(); ++i) {
    const PixelRect r = to_pixels(annotation.chars[i].bbox, w, h);
    const int x0 = std::max(0, static_cast<int>(std::floor(r.x0)) - 2);
    const int y0 = std::max(0, static_cast<int>(std::floor(r.y0)) - 2);
    const int x1 = std::min(w, static_cast<int>(std::ceil(r.x1)) + 2);
    const int y1 = std::min(h, static_cast<int>(std::ceil(r.y1)) + 2);
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x)
        if (is_relief(x, y)) relief[i].push_back(static_cast<std::size_t>(y) * w + x);
    if (relief[i].empty() || params.wear_fraction <= 0.0) continue;

    // Smooth random wear field; the lowest-valued relief pixels go first, so
    // a larger wear fraction erases a superset of a smaller one.
    Rng rng(mix_seed(seed, i));
    struct Bump { double x, y, s, a; };
    std::vector<Bump> bumps(4);
    const double span = std::max(x1 - x0, y1 - y0);
    for (auto& b : bumps)
      b = {uniform(rng, x0, x1), uniform(rng, y0, y1), 0.3 * span, uniform(rng, 0.5, 1.5)};
    std::vector<std::pair<double, std::size_t>> order;
    for (auto idx : relief[i]) {
      const double px = static_cast<double>(idx % w) + 0.5;
      const double py = static_cast<double>(idx / w) + 0.5;
      double f = 0.0;
      for (const auto& b : bumps) {
        const double d2 = (px - b.x) * (px - b.x) + (py - b.y) * (py - b.y);
        f += b.a * std::exp(-d2 / (2.0 * b.s * b.s));
      }
      order.emplace_back(f, idx);
    }
    std::sort(order.begin(), order.end());
    const auto k = static_cast<std::size_t>(
        std::lround(params.wear_fraction * static_cast<double>(order.size())));
    for (std::size_t j = 0; j < k; ++j) erased[order[j].second] = 1;
  }

  if (params.occlusion_discs > 0) {
    Rng rng(mix_seed(seed, 0x0cc1u));
    const double diameter = std::min(w, h) / 1.08;
    for (int d = 0; d < params.occlusion_discs; ++d) {
      const double rr = 0.45 * std::min(w, h) * std::sqrt(uniform01(rng));
      const double a = 2.0 * std::numbers::pi * uniform01(rng);
      const double cx = 0.5 * w + rr * std::cos(a);
      const double cy = 0.5 * h + rr * std::sin(a);
      const double radius =
          diameter * uniform(rng, params.occlusion_radius_min, params.occlusion_radius_max);
      for (int y = std::max(0, int(cy - radius)); y < std::min(h, int(cy + radius) + 1); ++y)
        for (int x = std::max(0, int(cx - radius)); x < std::min(w, int(cx + radius) + 1); ++x)
          if (std::hypot(x + 0.5 - cx, y + 0.5 - cy) <= radius && image.at(x, y) < kSealPixelMax)
            erased[static_cast<std::size_t>(y) * w + x] = 1;
    }
  }

  Image out = image;
  for (std::size_t idx = 0; idx < erased.size(); ++idx)
    if (erased[idx]) out.pixels()[idx] = base;

  SealAnnotation ann = annotation;
  for (std::size_t i = 0; i < ann.chars.size(); ++i) {
    if (relief[i].empty()) {
      ann.chars[i].damage = params.wear_fraction;
      continue;
    }
    std::size_t hit = 0;
    for (auto idx : relief[i]) hit += erased[idx];
    ann.chars[i].damage = static_cast<double>(hit) / static_cast<double>(relief[i].size());
  }
  return {std::move(out), std::move(ann)};
}

}  // namespace sealread
