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

#include <cmath>
#include <numeric>

#include "sealread/error.hpp"
#include "sealread/metrics.hpp"

namespace sealread {

namespace detail {

EditCounts levenshtein_ids(std::span<const std::size_t> pred, std::span<const std::size_t> gt) {
  const std::size_t n = pred.size(), m = gt.size();
  // cost = (edits, indels), compared lexicographically.
  struct Cost {
    std::size_t edits = 0, indels = 0;
    bool operator<(const Cost& o) const {
      return edits != o.edits ? edits < o.edits : indels < o.indels;
    }
    bool operator==(const Cost&) const = default;
  };
  std::vector<Cost> dp((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> Cost& { return dp[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = {i, i};
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = {j, j};
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const Cost& d = at(i - 1, j - 1);
      Cost best = pred[i - 1] == gt[j - 1] ? d : Cost{d.edits + 1, d.indels};
      const Cost del{at(i - 1, j).edits + 1, at(i - 1, j).indels + 1};
      const Cost ins{at(i, j - 1).edits + 1, at(i, j - 1).indels + 1};
      if (del < best) best = del;
      if (ins < best) best = ins;
      at(i, j) = best;
    }
  }
  // Backtrace match > substitute > delete > insert along optimal moves.
  EditCounts e;
  e.N = m;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const Cost cur = at(i, j);
    if (i > 0 && j > 0) {
      const Cost& d = at(i - 1, j - 1);
      if (pred[i - 1] == gt[j - 1] && d == cur) {
        --i, --j;
        continue;
      }
      if (pred[i - 1] != gt[j - 1] && Cost{d.edits + 1, d.indels} == cur) {
        ++e.S;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && Cost{at(i - 1, j).edits + 1, at(i - 1, j).indels + 1} == cur) {
      ++e.D;
      --i;
      continue;
    }
    ++e.I;
    --j;
  }
  return e;
}

}  // namespace detail

double cer(const EditCounts& e) {
  if (e.N == 0) throw ValidationError("CER is undefined for an empty ground truth");
  return double(e.total()) / double(e.N);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty list");
  return std::accumulate(values.begin(), values.end(), 0.0) / double(values.size());
}

double round_to(double value, int decimals) {
  const double f = std::pow(10.0, decimals);
  return std::round(value * f) / f;
}

}  // namespace sealread
