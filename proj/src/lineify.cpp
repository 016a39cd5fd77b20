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

#include "sealread/lineify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include <fmt/format.h>

#include "sealread/alphabet.hpp"
#include "sealread/error.hpp"

namespace sealread {

using nlohmann::json;

void HoughParams::validate() const {
  auto bad = [](const char* what) { throw ValidationError(fmt::format("hough: {}", what)); };
  if (!(theta_range_deg >= 0) || theta_range_deg >= 90) bad("theta_range_deg must be in [0, 90)");
  if (!(theta_step_deg > 0)) bad("theta_step_deg must be positive");
  if (!(rho_step > 0)) bad("rho_step must be positive");
  if (min_boxes_per_line < 1) bad("min_boxes_per_line must be >= 1");
  if (!(proximity_factor > 0)) bad("proximity_factor must be positive");
  if (!(max_gap_factor > 0)) bad("max_gap_factor must be positive");
  if (!(aspect_ratio > 0)) bad("aspect_ratio must be positive");
}

json to_json(const HoughParams& p) {
  return {{"theta_range_deg", p.theta_range_deg}, {"theta_step_deg", p.theta_step_deg},
          {"rho_step", p.rho_step},               {"min_boxes_per_line", p.min_boxes_per_line},
          {"proximity_factor", p.proximity_factor}, {"max_gap_factor", p.max_gap_factor},
          {"aspect_ratio", p.aspect_ratio}};
}

HoughParams hough_params_from_json(const json& j, HoughParams p) {
  if (!j.is_object()) throw ValidationError("hough: expected an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "theta_range_deg") p.theta_range_deg = v.get<double>();
    else if (key == "theta_step_deg") p.theta_step_deg = v.get<double>();
    else if (key == "rho_step") p.rho_step = v.get<double>();
    else if (key == "min_boxes_per_line") p.min_boxes_per_line = v.get<int>();
    else if (key == "proximity_factor") p.proximity_factor = v.get<double>();
    else if (key == "max_gap_factor") p.max_gap_factor = v.get<double>();
    else if (key == "aspect_ratio") p.aspect_ratio = v.get<double>();
    else throw ValidationError(fmt::format("hough: unknown key '{}'", key));
  }
  p.validate();
  return p;
}

namespace {

struct Pt {
  double x, y;
};

double rho_of(const Pt& p, double th) { return -p.x * std::sin(th) + p.y * std::cos(th); }
double along_of(const Pt& p, double th) { return p.x * std::cos(th) + p.y * std::sin(th); }

struct Hypothesis {
  double theta = 0;
  double rho = 0;
  std::vector<std::size_t> members;
};

// Largest run of consecutive (along the line) candidates with no gap above
// max_gap; earliest run wins ties.
std::vector<std::size_t> contiguous_run(std::vector<std::size_t> cand, const std::vector<Pt>& pts,
                                        double th, double max_gap) {
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
    const double ta = along_of(pts[a], th), tb = along_of(pts[b], th);
    return ta != tb ? ta < tb : a < b;
  });
  std::size_t best_lo = 0, best_len = 0, lo = 0;
  for (std::size_t i = 0; i <= cand.size(); ++i) {
    const bool brk = i == cand.size() ||
                     (i > lo && along_of(pts[cand[i]], th) - along_of(pts[cand[i - 1]], th) > max_gap);
    if (brk) {
      if (i - lo > best_len) best_lo = lo, best_len = i - lo;
      lo = i;
    }
  }
  return {cand.begin() + static_cast<std::ptrdiff_t>(best_lo),
          cand.begin() + static_cast<std::ptrdiff_t>(best_lo + best_len)};
}

TextLine make_line(std::vector<std::size_t> members, double theta, double rho,
                   const std::vector<Pt>& pts, std::span<const BBox> boxes) {
  TextLine line;
  line.theta = theta;
  line.rho = rho;
  double sy = 0;
  for (auto m : members) sy += boxes[m].cy;
  line.mean_y = sy / static_cast<double>(members.size());
  line.member_indices = std::move(members);
  for (auto m : line.member_indices) line.positions.push_back(along_of(pts[m], theta));
  return line;
}

}  // namespace

std::vector<TextLine> extract_lines(std::span<const BBox> boxes, const HoughParams& params) {
  params.validate();
  if (boxes.empty()) throw ValidationError("extract_lines: no boxes");

  std::vector<double> heights;
  std::vector<Pt> pts;
  for (const auto& b : boxes) {
    heights.push_back(b.h);
    pts.push_back({b.cx * params.aspect_ratio, b.cy});
  }
  std::nth_element(heights.begin(), heights.begin() + heights.size() / 2, heights.end());
  double median_h = heights[heights.size() / 2];
  if (!(median_h > 0)) median_h = 1e-3;

  const double rho_step = params.rho_step * median_h;
  const double prox = params.proximity_factor * median_h;
  const double max_gap = params.max_gap_factor * median_h;
  constexpr double kDeg = std::numbers::pi / 180.0;
  const int n_theta = static_cast<int>(std::floor(params.theta_range_deg / params.theta_step_deg + 1e-9));
  // Thetas ordered by |theta| then sign, so strict improvement keeps the horizontal prior.
  std::vector<double> thetas{0.0};
  for (int i = 1; i <= n_theta; ++i) {
    thetas.push_back(-i * params.theta_step_deg * kDeg);
    thetas.push_back(i * params.theta_step_deg * kDeg);
  }

  std::vector<char> assigned(boxes.size(), 0);
  std::vector<TextLine> lines;

  for (;;) {
    std::optional<Hypothesis> best;
    std::size_t best_votes = 0;
    for (double th : thetas) {
      std::map<long long, std::vector<std::size_t>> cells;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (!assigned[i])
          cells[static_cast<long long>(std::floor(rho_of(pts[i], th) / rho_step))].push_back(i);
      for (const auto& [cell, votes] : cells) {
        if (votes.size() < static_cast<std::size_t>(params.min_boxes_per_line)) continue;
        double rho = 0;
        for (auto v : votes) rho += rho_of(pts[v], th);
        rho /= static_cast<double>(votes.size());
        std::vector<std::size_t> cand;
        for (std::size_t i = 0; i < pts.size(); ++i)
          if (!assigned[i] && std::abs(rho_of(pts[i], th) - rho) <= prox) cand.push_back(i);
        auto run = contiguous_run(std::move(cand), pts, th, max_gap);
        if (run.size() < static_cast<std::size_t>(params.min_boxes_per_line)) continue;
        // Validated membership first, then accumulator votes; ties keep the
        // earlier theta (closer to horizontal) and the smaller rho.
        const bool better = !best || run.size() > best->members.size() ||
                            (run.size() == best->members.size() && votes.size() > best_votes);
        if (better) {
          best = Hypothesis{th, rho, std::move(run)};
          best_votes = votes.size();
        }
      }
    }
    if (!best) break;
    for (auto m : best->members) assigned[m] = 1;
    lines.push_back(make_line(std::move(best->members), best->theta, best->rho, pts, boxes));
  }

  // Orphans: nearest emitted line within 2x proximity, else their own line.
  std::vector<std::size_t> singles;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (assigned[i]) continue;
    std::optional<std::size_t> near;
    double near_d = 2.0 * prox;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      const double d = std::abs(rho_of(pts[i], lines[l].theta) - lines[l].rho);
      if (d <= near_d && (!near || d < near_d)) near = l, near_d = d;
    }
    if (near) {
      auto& line = lines[*near];
      line.member_indices.push_back(i);
      line.positions.push_back(along_of(pts[i], line.theta));
      const double k = static_cast<double>(line.member_indices.size());
      line.mean_y += (boxes[i].cy - line.mean_y) / k;
    } else {
      singles.push_back(i);
    }
  }
  for (auto i : singles) lines.push_back(make_line({i}, 0.0, pts[i].y, pts, boxes));

  for (auto& line : lines) {
    std::vector<std::size_t> order(line.member_indices.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return line.positions[a] != line.positions[b] ? line.positions[a] < line.positions[b]
                                                    : line.member_indices[a] < line.member_indices[b];
    });
    TextLine sorted = line;
    for (std::size_t k = 0; k < order.size(); ++k) {
      sorted.member_indices[k] = line.member_indices[order[k]];
      sorted.positions[k] = line.positions[order[k]];
    }
    line = std::move(sorted);
  }
  return lines;
}

std::vector<TextLine> reading_order(std::vector<TextLine> lines) {
  for (auto& line : lines) {
    if (line.positions.size() != line.member_indices.size())
      throw ValidationError("reading_order: positions and members differ in length");
    std::vector<std::pair<double, std::size_t>> keyed;
    for (std::size_t k = 0; k < line.positions.size(); ++k)
      keyed.emplace_back(line.positions[k], line.member_indices[k]);
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 0; k < keyed.size(); ++k) {
      line.positions[k] = keyed[k].first;
      line.member_indices[k] = keyed[k].second;
    }
  }
  std::stable_sort(lines.begin(), lines.end(), [](const TextLine& a, const TextLine& b) {
    return a.mean_y < b.mean_y;
  });
  return lines;
}

Transcription transcribe(std::span<const LabeledDetection> detections,
                         const std::vector<std::string>& classes, const HoughParams& params) {
  if (classes.empty()) throw ValidationError("transcribe: empty class list");
  std::vector<BBox> boxes;
  std::vector<std::string> names;
  for (const auto& d : detections) {
    d.scores.validate(classes.size());
    const auto& name = classes[d.scores.argmax()];
    if (name == kNonCharacter) continue;
    boxes.push_back(d.detection.bbox);
    names.push_back(name);
  }
  Transcription t;
  if (boxes.empty()) return t;
  for (const auto& line : reading_order(extract_lines(boxes, params))) {
    auto& out = t.lines.emplace_back();
    for (auto m : line.member_indices) {
      out.push_back(names[m]);
      t.flattened.push_back(names[m]);
    }
  }
  return t;
}

}  // namespace sealread
