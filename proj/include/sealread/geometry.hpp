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

namespace sealread {

/// Axis-aligned box in normalized center-size form: (cx, cy) is the box
/// center and (w, h) its size, all relative to the image dimensions.
struct BBox {
  double cx = 0.5;
  double cy = 0.5;
  double w = 0.0;
  double h = 0.0;

  double left() const { return cx - 0.5 * w; }
  double right() const { return cx + 0.5 * w; }
  double top() const { return cy - 0.5 * h; }
  double bottom() const { return cy + 0.5 * h; }
  double area() const { return w * h; }

  bool operator==(const BBox&) const = default;
};

/// True when 0 <= cx, cy <= 1 and 0 < w, h <= 1.
bool is_valid(const BBox& b);

/// Throws ValidationError with `context` in the message when !is_valid(b).
void validate(const BBox& b, const char* context);

BBox from_corners(double x0, double y0, double x1, double y1);

double intersection_area(const BBox& a, const BBox& b);

/// Intersection over union in [0, 1]. Two degenerate boxes give 0.
double iou(const BBox& a, const BBox& b);

/// Pixel-space rectangle, half-open: [x0, x1) x [y0, y1).
struct PixelRect {
  double x0, y0, x1, y1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

PixelRect to_pixels(const BBox& b, int image_w, int image_h);
BBox from_pixels(const PixelRect& r, int image_w, int image_h);

}  // namespace sealread
