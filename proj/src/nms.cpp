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

#include "sealread/infer.hpp"

namespace sealread {

std::vector<Detection> nms(std::vector<Detection> candidates, double iou_threshold) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const Detection& a, const Detection& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.bbox.cx != b.bbox.cx) return a.bbox.cx < b.bbox.cx;
    return a.bbox.cy < b.bbox.cy;
  });
  std::vector<Detection> kept;
  for (const auto& c : candidates) {
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return iou(k.bbox, c.bbox) > iou_threshold;
    });
    if (clear) kept.push_back(c);
  }
  return kept;
}

}  // namespace sealread
