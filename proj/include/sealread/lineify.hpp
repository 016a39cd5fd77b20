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

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sealread/geometry.hpp"
#include "sealread/infer.hpp"

namespace sealread {

struct HoughParams {
  double theta_range_deg = 20.0;
  double theta_step_deg = 1.0;
  double rho_step = 0.5;          // x median box height
  int min_boxes_per_line = 2;
  double proximity_factor = 0.75;  // x median box height
  /// Members of one line may not be further apart along the line than this
  /// (x median box height); splits hypotheses that graze two rows.
  double max_gap_factor = 2.5;
  /// image width / height; normalized x is scaled by it before fitting.
  double aspect_ratio = 1.0;

  void validate() const;
  bool operator==(const HoughParams&) const = default;
};

nlohmann::json to_json(const HoughParams& p);
HoughParams hough_params_from_json(const nlohmann::json& j, HoughParams defaults = {});

struct TextLine {
  std::vector<std::size_t> member_indices;
  /// Along-line coordinate of each member, parallel to member_indices.
  std::vector<double> positions;
  double rho = 0.0;
  double theta = 0.0;  // radians, direction of the line measured from horizontal
  double mean_y = 0.0;
};

std::vector<TextLine> extract_lines(std::span<const BBox> boxes, const HoughParams& params = {});

std::vector<TextLine> reading_order(std::vector<TextLine> lines);

struct Transcription {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> flattened;
};

/// `classes` names the score columns (last is NON_CHARACTER).
Transcription transcribe(std::span<const LabeledDetection> detections,
                         const std::vector<std::string>& classes, const HoughParams& params = {});

}  // namespace sealread
