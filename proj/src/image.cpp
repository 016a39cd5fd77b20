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

#include "sealread/image.hpp"

#include <algorithm>
#include <cmath>

#include "sealread/error.hpp"

namespace sealread {

Image::Image(int width, int height, float fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ValidationError("image dimensions must be nonnegative");
  px_.assign(static_cast<std::size_t>(width) * height, fill);
}

float Image::at_clamped(int x, int y) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return at(x, y);
}

float Image::sample(double x, double y) const {
  const double fx = x - 0.5;
  const double fy = y - 0.5;
  const int x0 = static_cast<int>(std::floor(fx));
  const int y0 = static_cast<int>(std::floor(fy));
  const double ax = fx - x0;
  const double ay = fy - y0;
  const double top = (1.0 - ax) * at_clamped(x0, y0) + ax * at_clamped(x0 + 1, y0);
  const double bot = (1.0 - ax) * at_clamped(x0, y0 + 1) + ax * at_clamped(x0 + 1, y0 + 1);
  return static_cast<float>((1.0 - ay) * top + ay * bot);
}

namespace {

// Mean of the source over [x0,x1)x[y0,y1), treating pixels as unit squares.
float area_mean(const Image& src, double x0, double y0, double x1, double y1) {
  double acc = 0.0;
  double wsum = 0.0;
  const int ix0 = static_cast<int>(std::floor(x0));
  const int iy0 = static_cast<int>(std::floor(y0));
  const int ix1 = static_cast<int>(std::ceil(x1));
  const int iy1 = static_cast<int>(std::ceil(y1));
  for (int y = iy0; y < iy1; ++y) {
    const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
    if (wy <= 0) continue;
    for (int x = ix0; x < ix1; ++x) {
      const double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
      if (wx <= 0) continue;
      acc += wx * wy * src.at_clamped(x, y);
      wsum += wx * wy;
    }
  }
  return wsum > 0 ? static_cast<float>(acc / wsum) : 0.0f;
}

}  // namespace

Image resample(const Image& src, const PixelRect& r, int out_w, int out_h) {
  Image out(out_w, out_h);
  const double sx = r.width() / out_w;
  const double sy = r.height() / out_h;
  const bool shrink = sx > 1.0 || sy > 1.0;
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      if (shrink) {
        const double x0 = r.x0 + x * sx;
        const double y0 = r.y0 + y * sy;
        out.at(x, y) = area_mean(src, x0, y0, x0 + sx, y0 + sy);
      } else {
        out.at(x, y) = src.sample(r.x0 + (x + 0.5) * sx, r.y0 + (y + 0.5) * sy);
      }
    }
  }
  return out;
}

Image resize(const Image& src, int out_w, int out_h) {
  return resample(src, {0.0, 0.0, double(src.width()), double(src.height())}, out_w, out_h);
}

Image downsample(const Image& src, int factor) {
  if (factor <= 1) return src;
  const int w = src.width() / factor;
  const int h = src.height() / factor;
  Image out(w, h);
  const float norm = 1.0f / static_cast<float>(factor * factor);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int dy = 0; dy < factor; ++dy)
        for (int dx = 0; dx < factor; ++dx) acc += src.at(x * factor + dx, y * factor + dy);
      out.at(x, y) = acc * norm;
    }
  }
  return out;
}

Image box_blur(const Image& src, int radius) {
  if (radius <= 0 || src.empty()) return src;
  const int w = src.width();
  const int h = src.height();
  const float norm = 1.0f / static_cast<float>(2 * radius + 1);
  Image tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int k = -radius; k <= radius; ++k) acc += src.at_clamped(x + k, y);
      tmp.at(x, y) = acc * norm;
    }
  }
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int k = -radius; k <= radius; ++k) acc += tmp.at_clamped(x, y + k);
      out.at(x, y) = acc * norm;
    }
  }
  return out;
}

std::vector<std::uint8_t> to_gray8(const Image& img) {
  std::vector<std::uint8_t> out(img.pixels().size());
  std::transform(img.pixels().begin(), img.pixels().end(), out.begin(), [](float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 255.0f)));
  });
  return out;
}

Image from_gray8(std::span<const std::uint8_t> data, int width, int height) {
  if (data.size() != static_cast<std::size_t>(width) * height)
    throw ValidationError("gray8 buffer size does not match dimensions");
  Image img(width, height);
  std::copy(data.begin(), data.end(), img.pixels().begin());
  return img;
}

}  // namespace sealread
