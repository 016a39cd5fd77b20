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

#include <cstdint>
#include <string_view>
#include <vector>

namespace sealread {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Stroke skeleton of one glyph: polylines in a box of width `aspect` and
/// height 1, y growing downwards.
struct GlyphSkeleton {
  double aspect = 1.0;
  double height = 1.0;
  std::vector<std::vector<Point>> strokes;
};

/// Skeleton for a registry class name; throws ValidationError for names
/// without a glyph (including NON_CHARACTER).
const GlyphSkeleton& glyph_skeleton(std::string_view class_name);

/// Binary glyph raster at integer pixel offset (x0, y0) of the seal image.
struct GlyphMask {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  bool test(int x, int y) const {
    return x >= x0 && y >= y0 && x < x0 + width && y < y0 + height &&
           bits[static_cast<std::size_t>(y - y0) * width + (x - x0)] != 0;
  }
  std::size_t count() const;
};

struct GlyphPlacement {
  Point center;          // pixel coordinates of the skeleton box center
  double size_px = 0.0;  // skeleton box height in pixels
  double stroke_radius_px = 1.0;
  double rotation_rad = 0.0;
};

/// Rasterizes the skeleton; a pixel is set when its center lies within the
/// stroke radius of the skeleton. The mask is clipped to the image bounds.
GlyphMask rasterize(const GlyphSkeleton& g, const GlyphPlacement& p, int image_w, int image_h);

/// Tight pixel bounds of the set bits: [x0, x1) x [y0, y1). All zero when empty.
struct MaskBounds {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};
MaskBounds tight_bounds(const GlyphMask& m);

}  // namespace sealread
