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
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "sealread/error.hpp"
#include "sealread/metrics.hpp"

namespace sealread {

namespace {

void check_inputs(std::span<const ClassScores> scores, std::span<const std::size_t> labels,
                  std::size_t n_classes) {
  if (scores.empty()) throw ValidationError("classification metrics: no samples");
  if (scores.size() != labels.size())
    throw ValidationError("classification metrics: scores and labels differ in length");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].scores.size() != n_classes)
      throw ValidationError(fmt::format("classification metrics: sample {} has {} scores, expected {}",
                                        i, scores[i].scores.size(), n_classes));
    if (labels[i] >= n_classes)
      throw ValidationError(fmt::format("classification metrics: label {} out of range", labels[i]));
  }
}

// 0-based rank of class c: better scores, and equal scores at lower index, come first.
std::size_t rank_of(const ClassScores& s, std::size_t c) {
  std::size_t r = 0;
  for (std::size_t j = 0; j < s.scores.size(); ++j)
    if (s.scores[j] > s.scores[c] || (s.scores[j] == s.scores[c] && j < c)) ++r;
  return r;
}

}  // namespace

double topk_accuracy(std::span<const ClassScores> scores, std::span<const std::size_t> labels,
                     int k) {
  if (k < 1) throw ValidationError("topk_accuracy: k must be >= 1");
  if (scores.empty()) throw ValidationError("topk_accuracy: no samples");
  check_inputs(scores, labels, scores.front().scores.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    hits += rank_of(scores[i], labels[i]) < static_cast<std::size_t>(k);
  return double(hits) / double(scores.size());
}

std::int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

ConfusionMatrix topk_confusion(std::span<const ClassScores> scores,
                               std::span<const std::size_t> labels, std::size_t n_classes, int k) {
  if (k < 1) throw ValidationError("topk_confusion: k must be >= 1");
  check_inputs(scores, labels, n_classes);
  ConfusionMatrix m{n_classes, std::vector<std::int64_t>(n_classes * n_classes, 0)};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const std::size_t t = labels[i];
    const std::size_t p =
        rank_of(scores[i], t) < static_cast<std::size_t>(k) ? t : scores[i].argmax();
    ++m.counts[t * n_classes + p];
  }
  return m;
}

ClassificationSummary confusion_and_f1(std::span<const ClassScores> scores,
                                       std::span<const std::size_t> labels, std::size_t n_classes) {
  ClassificationSummary s;
  s.confusion = topk_confusion(scores, labels, n_classes, 1);
  const auto& m = s.confusion;
  s.f1.assign(n_classes, 0.0);
  s.recall.assign(n_classes, 0.0);
  double f1_sum = 0.0, acc_sum = 0.0;
  std::size_t supported = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::int64_t support = 0, predicted = 0;
    for (std::size_t j = 0; j < n_classes; ++j) {
      support += m.at(c, j);
      predicted += m.at(j, c);
    }
    if (support == 0) {
      s.excluded.push_back(c);
      continue;
    }
    const double tp = double(m.at(c, c));
    const double recall = tp / double(support);
    const double precision = predicted ? tp / double(predicted) : 0.0;
    s.recall[c] = recall;
    s.f1[c] = tp > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    f1_sum += s.f1[c];
    acc_sum += recall;
    ++supported;
  }
  s.macro_f1 = f1_sum / double(supported);
  s.per_class_mean_acc = acc_sum / double(supported);
  return s;
}

}  // namespace sealread
