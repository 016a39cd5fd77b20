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
#include <set>

#include <fmt/format.h>

#include "sealread/corpus.hpp"
#include "sealread/error.hpp"
#include "sealread/rng.hpp"

namespace sealread {

FoldPlan make_folds(const CorpusManifest& manifest, int k, std::uint64_t seed,
                    std::optional<Side> side_filter) {
  if (k < 2) throw ValidationError(fmt::format("k must be at least 2 (got {})", k));
  std::vector<std::string> ids;
  for (const auto& s : manifest.seals) {
    if (!side_filter || s.side == *side_filter) ids.push_back(s.seal_id);
  }
  if (ids.size() < static_cast<std::size_t>(k))
    throw ValidationError(
        fmt::format("too few seals for {} folds: {} selected", k, ids.size()));
  // Sorting first makes the plan independent of manifest order.
  std::sort(ids.begin(), ids.end());
  Rng rng(seed);
  shuffle(ids.begin(), ids.end(), rng);

  FoldPlan plan{k, seed, {}};
  const std::size_t base = ids.size() / k;
  const std::size_t extra = ids.size() % k;
  auto it = ids.begin();
  for (int f = 0; f < k; ++f) {
    const std::size_t n = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
    plan.folds.emplace_back(it, it + n);
    it += n;
  }
  return plan;
}

FoldSplit fold_split(const FoldPlan& plan, int test_fold, const CorpusManifest& manifest,
                     std::span<const std::string> augment_ids) {
  if (test_fold < 0 || test_fold >= plan.k || test_fold >= static_cast<int>(plan.folds.size()))
    throw ValidationError(
        fmt::format("test fold {} out of range for a {}-fold plan", test_fold, plan.k));
  FoldSplit split;
  std::set<std::string> test_ids;
  for (const auto& id : plan.folds[test_fold]) {
    split.test.push_back(&manifest.at(id));
    test_ids.insert(id);
  }
  for (int f = 0; f < static_cast<int>(plan.folds.size()); ++f) {
    if (f == test_fold) continue;
    for (const auto& id : plan.folds[f]) split.train.push_back(&manifest.at(id));
  }
  for (const auto& id : augment_ids) {
    if (test_ids.count(id))
      throw LeakageError(
          fmt::format("augmentation seal '{}' belongs to test fold {}", id, test_fold));
    split.train.push_back(&manifest.at(id));
  }
  return split;
}

std::vector<std::string> select_augmentation(const CorpusManifest& manifest, const FoldPlan& plan,
                                             int count, std::uint64_t seed) {
  if (count <= 0) return {};
  std::set<std::string> planned;
  for (const auto& f : plan.folds) planned.insert(f.begin(), f.end());
  std::vector<std::string> ids;
  for (const auto& s : manifest.seals) {
    if (s.side == Side::obverse && !planned.count(s.seal_id)) ids.push_back(s.seal_id);
  }
  std::sort(ids.begin(), ids.end());
  Rng rng(mix_seed(seed, 0x0b5e55ULL));
  shuffle(ids.begin(), ids.end(), rng);
  if (ids.size() > static_cast<std::size_t>(count)) ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

nlohmann::json to_json(const FoldPlan& plan) {
  return {{"k", plan.k}, {"seed", plan.seed}, {"folds", plan.folds}};
}

FoldPlan fold_plan_from_json(const nlohmann::json& j) {
  try {
    FoldPlan plan;
    plan.k = j.at("k").get<int>();
    plan.seed = j.at("seed").get<std::uint64_t>();
    plan.folds = j.at("folds").get<std::vector<std::vector<std::string>>>();
    if (plan.k < 2 || static_cast<int>(plan.folds.size()) != plan.k)
      throw ValidationError(
          fmt::format("fold plan: k={} but {} folds listed", plan.k, plan.folds.size()));
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("fold plan: {}", e.what()));
  }
}

std::uint64_t noncharacter_seed(std::uint64_t plan_seed, int fold_index,
                                std::string_view seal_id) {
  return mix_seed(mix_seed(plan_seed, static_cast<std::uint64_t>(fold_index)), fnv1a(seal_id));
}

}  // namespace sealread
