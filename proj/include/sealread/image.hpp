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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sealread/geometry.hpp"

namespace sealread {

/// Single-channel raster, row-major, intensities on the 0..255 scale.
class Image {
 public:
  Image() = default;
  Image(int width, int height, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  float& at(int x, int y) { return px_[static_cast<std::size_t>(y) * width_ + x]; }
  float at(int x, int y) const { return px_[static_cast<std::size_t>(y) * width_ + x]; }

  /// Clamped-coordinate read.
  float at_clamped(int x, int y) const;

  /// Bilinear sample at continuous pixel coordinates (pixel centers at +0.5).
  float sample(double x, double y) const;

  std::span<float> pixels() { return px_; }
  std::span<const float> pixels() const { return px_; }

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> px_;
};

/// Resamples the source region `r` (pixel units, may extend past the image)
/// onto an out_w x out_h grid. Area-averages when shrinking, bilinear otherwise.
Image resample(const Image& src, const PixelRect& r, int out_w, int out_h);

Image resize(const Image& src, int out_w, int out_h);

/// Integer-factor box downsampling; trailing pixels that do not fill a block are dropped.
Image downsample(const Image& src, int factor);

/// Separable box blur with the given radius, edges clamped.
Image box_blur(const Image& src, int radius);

/// Rounds and clamps to 8 bits.
std::vector<std::uint8_t> to_gray8(const Image& img);
Image from_gray8(std::span<const std::uint8_t> data, int width, int height);

// PNG, 8-bit. Reading accepts gray, gray+alpha, RGB and RGBA; color is
// converted to luminance by libpng.
Image read_png(const std::filesystem::path& path);
Image decode_png(std::span<const std::uint8_t> bytes);
void write_png(const Image& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const Image& img);

}  // namespace sealread
