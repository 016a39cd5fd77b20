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

#include <fmt/format.h>

#include "sealread/corpus.hpp"
#include "sealread/error.hpp"
#include "sealread/rng.hpp"

namespace sealread {

PixelRect padded_region(const BBox& box, int image_w, int image_h, double pad_fraction) {
  PixelRect r = to_pixels(box, image_w, image_h);
  const double pad = pad_fraction * std::max(r.width(), r.height());
  return {std::max(0.0, r.x0 - pad), std::max(0.0, r.y0 - pad),
          std::min<double>(image_w, r.x1 + pad), std::min<double>(image_h, r.y1 + pad)};
}

std::optional<Image> crop_box(const Image& image, const BBox& box, double pad_fraction,
                              int out_size) {
  if (pad_fraction < 0.0) throw ValidationError("pad_fraction must be nonnegative");
  const PixelRect r = padded_region(box, image.width(), image.height(), pad_fraction);
  if (r.width() <= 0.0 || r.height() <= 0.0) return std::nullopt;
  return resample(image, r, out_size, out_size);
}

CropSet extract_crops(const SealAnnotation& seal, const Image& image, double pad_fraction,
                      int out_size) {
  if (image.width() != seal.image_w || image.height() != seal.image_h)
    throw ValidationError(fmt::format("seal '{}': raster {}x{} does not match annotation {}x{}",
                                      seal.seal_id, image.width(), image.height(), seal.image_w,
                                      seal.image_h));
  if (out_size <= 0) throw ValidationError("crop size must be positive");
  CropSet out;
  for (std::size_t i = 0; i < seal.chars.size(); ++i) {
    const auto& c = seal.chars[i];
    auto crop = crop_box(image, c.bbox, pad_fraction, out_size);
    if (!crop) {
      out.warnings.push_back({seal.seal_id, i, "degenerate box after clipping"});
      continue;
    }
    out.crops.push_back({std::move(*crop), c.class_name, i});
  }
  return out;
}

NonCharacterSample sample_noncharacters(const SealAnnotation& seal, int count,
                                        std::uint64_t rng_seed) {
  NonCharacterSample out;
  if (count <= 0) return out;
  std::vector<BBox> gts;
  double mw = 0.0;
  double mh = 0.0;
  for (const auto& c : seal.chars) {
    if (c.class_name == kNonCharacter) continue;
    gts.push_back(c.bbox);
    mw += c.bbox.w;
    mh += c.bbox.h;
  }
  if (gts.empty())
    throw ValidationError(
        fmt::format("seal '{}': non-character sampling needs at least one character", seal.seal_id));
  mw /= static_cast<double>(gts.size());
  mh /= static_cast<double>(gts.size());

  Rng rng(rng_seed);
  const long max_attempts = static_cast<long>(kNonCharacterAttemptsPerBox) * count;
  for (long attempt = 0; attempt < max_attempts && static_cast<int>(out.boxes.size()) < count;
       ++attempt) {
    // Uniform point in the disc inscribed in the (normalized) image.
    const double r = 0.5 * std::sqrt(uniform01(rng));
    const double a = 2.0 * std::numbers::pi * uniform01(rng);
    const BBox b{0.5 + r * std::cos(a), 0.5 + r * std::sin(a), mw, mh};
    if (b.left() < 0.0 || b.top() < 0.0 || b.right() > 1.0 || b.bottom() > 1.0) continue;
    const bool clear = std::all_of(gts.begin(), gts.end(), [&](const BBox& g) {
      return iou(b, g) < kNonCharacterMaxIou;
    });
    if (clear) out.boxes.push_back({b, std::string(kNonCharacter), std::nullopt, std::nullopt});
  }
  if (static_cast<int>(out.boxes.size()) < count)
    out.warning = fmt::format("seal '{}': placed {} of {} non-character boxes", seal.seal_id,
                              out.boxes.size(), count);
  return out;
}

}  // namespace sealread
