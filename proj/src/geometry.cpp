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

#include "sealread/geometry.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "sealread/error.hpp"

namespace sealread {

bool is_valid(const BBox& b) {
  return b.cx >= 0.0 && b.cx <= 1.0 && b.cy >= 0.0 && b.cy <= 1.0 && b.w > 0.0 &&
         b.w <= 1.0 && b.h > 0.0 && b.h <= 1.0;
}

void validate(const BBox& b, const char* context) {
  if (!is_valid(b)) {
    throw ValidationError(fmt::format("{}: invalid box (cx={}, cy={}, w={}, h={})", context,
                                      b.cx, b.cy, b.w, b.h));
  }
}

BBox from_corners(double x0, double y0, double x1, double y1) {
  return {0.5 * (x0 + x1), 0.5 * (y0 + y1), x1 - x0, y1 - y0};
}

double intersection_area(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

PixelRect to_pixels(const BBox& b, int image_w, int image_h) {
  return {b.left() * image_w, b.top() * image_h, b.right() * image_w, b.bottom() * image_h};
}

BBox from_pixels(const PixelRect& r, int image_w, int image_h) {
  return from_corners(r.x0 / image_w, r.y0 / image_h, r.x1 / image_w, r.y1 / image_h);
}

}  // namespace sealread
