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

#include "sealread/glyphs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "sealread/error.hpp"

namespace sealread {

namespace {

// Compact glyph description. Tokens:
//   W a        box width (aspect); height is 1
//   H h        skeleton height when shorter than the box
//   L x0 y0 x1 y1
//   A cx cy rx ry a0 a1     elliptic arc, degrees, clockwise on screen
struct GlyphSource {
  const char* name;
  const char* program;
};

constexpr GlyphSource kGlyphs[] = {
    {"ALPHA", "W .75 L 0 1 .375 0 L .375 0 .75 1 L .17 .62 .58 .62"},
    {"BETA", "W .6 L 0 0 0 1 L 0 0 .3 0 L 0 .47 .32 .47 L 0 1 .32 1 "
             "A .3 .235 .26 .235 -90 90 A .32 .735 .28 .265 -90 90"},
    {"GAMMA", "W .55 L 0 0 0 1 L 0 0 .55 0"},
    {"DELTA", "W .75 L 0 1 .375 0 L .375 0 .75 1 L 0 1 .75 1"},
    {"EPSILON", "W .55 L 0 0 0 1 L 0 0 .55 0 L 0 .5 .42 .5 L 0 1 .55 1"},
    {"ZETA", "W .6 L 0 0 .6 0 L .6 0 0 1 L 0 1 .6 1"},
    {"ETA", "W .65 L 0 0 0 1 L .65 0 .65 1 L 0 .5 .65 .5"},
    {"THETA", "W .7 A .35 .5 .35 .5 0 360 L .14 .5 .56 .5"},
    {"IOTA", "W .34 L .17 0 .17 1 L 0 0 .34 0 L 0 1 .34 1"},
    {"KAPPA", "W .6 L 0 0 0 1 L .6 0 0 .55 L .2 .42 .6 1"},
    {"LAMBDA", "W .7 L 0 1 .35 0 L .35 0 .7 1"},
    {"MU", "W .82 L 0 1 0 0 L 0 0 .41 .65 L .41 .65 .82 0 L .82 0 .82 1"},
    {"NU", "W .65 L 0 1 0 0 L 0 0 .65 1 L .65 1 .65 0"},
    {"XI", "W .6 L 0 0 .6 0 L .12 .5 .48 .5 L 0 1 .6 1 L .3 .3 .3 .7"},
    {"OMICRON", "W .7 A .35 .5 .35 .5 0 360"},
    {"PI", "W .65 L 0 0 .65 0 L .1 0 .1 1 L .55 0 .55 1"},
    {"RHO", "W .55 L 0 0 0 1 L 0 0 .28 0 L 0 .55 .28 .55 A .28 .275 .27 .275 -90 90"},
    {"SIGMA", "W .6 L .6 0 0 0 L 0 0 .32 .5 L .32 .5 0 1 L 0 1 .6 1"},
    {"TAU", "W .6 L 0 0 .6 0 L .3 0 .3 1"},
    {"UPSILON", "W .7 L 0 0 .35 .5 L .7 0 .35 .5 L .35 .5 .35 1"},
    {"PHI", "W .72 L .36 0 .36 1 A .36 .5 .36 .26 0 360"},
    {"CHI", "W .65 L 0 0 .65 1 L .65 0 0 1"},
    {"PSI", "W .72 L .36 0 .36 1 A .36 .25 .36 .4 0 180"},
    {"OMEGA", "W .82 A .41 .42 .36 .42 150 390 L .2 1 .05 .78 L .62 1 .77 .78 L 0 1 .22 1 "
              "L .6 1 .82 1"},
    {"BETA_CLOSED", "W .55 L 0 .25 0 1 A .27 .25 .27 .25 0 360 A .27 .74 .27 .26 -90 180"},
    {"OU_LIGATURE", "W .6 A .3 .74 .26 .26 0 360 L 0 0 .3 .48 L .6 0 .3 .48"},
    {"CT_LIGATURE", "W .8 A .32 .5 .32 .5 100 300 L .3 0 .8 0 L .58 0 .58 1"},
    {"KAI", "W .55 A .28 .26 .27 .26 20 270 A .28 .74 .27 .26 -90 160 L .28 .0 .52 .06"},
    {"CROISETTE", "W .7 H .7 L .35 0 .35 .7 L 0 .35 .7 .35 L .23 0 .47 0 L .23 .7 .47 .7"},
};

GlyphSkeleton compile(std::string_view name, const char* program) {
  GlyphSkeleton g;
  std::istringstream in(program);
  std::string op;
  while (in >> op) {
    if (op == "W") {
      in >> g.aspect;
    } else if (op == "H") {
      in >> g.height;
    } else if (op == "L") {
      Point a, b;
      in >> a.x >> a.y >> b.x >> b.y;
      g.strokes.push_back({a, b});
    } else if (op == "A") {
      double cx, cy, rx, ry, a0, a1;
      in >> cx >> cy >> rx >> ry >> a0 >> a1;
      const int n = std::max(8, static_cast<int>(std::ceil(std::abs(a1 - a0) / 7.5)));
      std::vector<Point> arc;
      for (int i = 0; i <= n; ++i) {
        const double t = (a0 + (a1 - a0) * i / n) * std::numbers::pi / 180.0;
        arc.push_back({cx + rx * std::cos(t), cy + ry * std::sin(t)});
      }
      g.strokes.push_back(std::move(arc));
    } else {
      throw std::logic_error(fmt::format("glyph {}: bad token '{}'", name, op));
    }
    if (!in && !in.eof()) throw std::logic_error(fmt::format("glyph {}: truncated", name));
  }
  return g;
}

double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a.x + t * dx - p.x;
  const double ey = a.y + t * dy - p.y;
  return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

const GlyphSkeleton& glyph_skeleton(std::string_view class_name) {
  static const auto table = [] {
    std::map<std::string, GlyphSkeleton, std::less<>> m;
    for (const auto& g : kGlyphs) m.emplace(g.name, compile(g.name, g.program));
    return m;
  }();
  auto it = table.find(class_name);
  if (it == table.end())
    throw ValidationError(fmt::format("no glyph for class '{}'", class_name));
  return it->second;
}

std::size_t GlyphMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

GlyphMask rasterize(const GlyphSkeleton& g, const GlyphPlacement& p, int image_w, int image_h) {
  // Skeleton -> pixel transform: scale, center on the box middle, rotate.
  const double c = std::cos(p.rotation_rad);
  const double s = std::sin(p.rotation_rad);
  std::vector<std::vector<Point>> strokes;
  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  for (const auto& stroke : g.strokes) {
    std::vector<Point> px;
    for (const auto& q : stroke) {
      const double u = (q.x - 0.5 * g.aspect) * p.size_px;
      const double v = (q.y - 0.5 * g.height) * p.size_px;
      const Point t{p.center.x + c * u - s * v, p.center.y + s * u + c * v};
      minx = std::min(minx, t.x);
      maxx = std::max(maxx, t.x);
      miny = std::min(miny, t.y);
      maxy = std::max(maxy, t.y);
      px.push_back(t);
    }
    strokes.push_back(std::move(px));
  }
  const double r = p.stroke_radius_px;
  GlyphMask m;
  m.x0 = std::max(0, static_cast<int>(std::floor(minx - r - 1)));
  m.y0 = std::max(0, static_cast<int>(std::floor(miny - r - 1)));
  const int x1 = std::min(image_w, static_cast<int>(std::ceil(maxx + r + 1)));
  const int y1 = std::min(image_h, static_cast<int>(std::ceil(maxy + r + 1)));
  m.width = std::max(0, x1 - m.x0);
  m.height = std::max(0, y1 - m.y0);
  m.bits.assign(static_cast<std::size_t>(m.width) * m.height, 0);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      const Point q{m.x0 + x + 0.5, m.y0 + y + 0.5};
      double d = 1e300;
      for (const auto& stroke : strokes) {
        for (std::size_t i = 0; i + 1 < stroke.size(); ++i)
          d = std::min(d, segment_distance(q, stroke[i], stroke[i + 1]));
      }
      if (d <= r) m.bits[static_cast<std::size_t>(y) * m.width + x] = 1;
    }
  }
  return m;
}

MaskBounds tight_bounds(const GlyphMask& m) {
  MaskBounds b{m.x0 + m.width, m.y0 + m.height, m.x0, m.y0};
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (!m.bits[static_cast<std::size_t>(y) * m.width + x]) continue;
      b.x0 = std::min(b.x0, m.x0 + x);
      b.y0 = std::min(b.y0, m.y0 + y);
      b.x1 = std::max(b.x1, m.x0 + x + 1);
      b.y1 = std::max(b.y1, m.y0 + y + 1);
    }
  }
  if (b.empty()) return {};
  return b;
}

}  // namespace sealread
