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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sealread/baseline.hpp"
#include "sealread/corpus.hpp"
#include "sealread/lineify.hpp"
#include "sealread/metrics.hpp"

namespace sealread {

enum class Backend { baseline, external, oracle, null };

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view s);

struct RunConfig {
  int k = 10;
  std::uint64_t seed = 42;
  double iou_threshold = 0.5;
  double conf_threshold = 0.25;  // operating point for precision/recall and transcription
  HoughParams hough;
  Backend detector = Backend::baseline;
  Backend classifier = Backend::baseline;
  std::string detector_command;    // external detector
  std::string classifier_command;  // external classifier
  double timeout_s = 30.0;
  BaselineParams baseline;
  int min_samples = 50;
  int noncharacters = 150;  // per fold, spread over the test seals
  int augment_obverse = 0;
  std::optional<Side> side = Side::reverse;  // nullopt: every seal
  double crop_pad = 0.15;
  int crop_size = 256;
  double val_fraction = 0.15;  // forwarded to external trainers, unused here
  int jobs = 1;

  void validate() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Keys present in `j` override `defaults`; unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig defaults = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig defaults = {});

struct DetectionSummary {
  double precision = 0.0;
  double recall = 0.0;
  double map50 = 0.0;
  double map5095 = 0.0;
};

struct ClassificationReport {
  std::size_t samples = 0;
  double top1 = 0.0, top2 = 0.0, top3 = 0.0;
  double macro_f1 = 0.0;
  double per_class_mean_acc = 0.0;
  ConfusionMatrix confusion;       // top-1
  ConfusionMatrix confusion_top3;
  std::vector<std::string> excluded;  // classes without test support
};

struct SealResult {
  std::string seal_id;
  bool failed = false;
  std::string error;
  std::size_t detections = 0;
  std::vector<std::vector<std::string>> predicted;
  std::vector<std::vector<std::string>> ground_truth;
  EditCounts edits;
  double cer = 0.0;
};

struct FoldReport {
  int fold_index = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  DetectionSummary detection;
  ClassificationReport classification;
  std::vector<SealResult> seals;  // test order
  double cer = 0.0;
  std::size_t failed = 0;
  std::vector<std::string> warnings;
};

struct OverallMetrics {
  DetectionSummary detection;
  double top1 = 0.0, top2 = 0.0, top3 = 0.0, macro_f1 = 0.0, per_class_mean_acc = 0.0;
  double cer = 0.0;
  std::size_t failed = 0;
};

struct CVReport {
  RunConfig config;
  std::vector<std::string> classes;
  FoldPlan plan;
  std::vector<std::string> augment_ids;
  std::vector<FoldReport> folds;
  OverallMetrics overall;
};

using ImageLoader = std::function<Image(const SealAnnotation&)>;

/// Loads `<root>/<image_path>`.
ImageLoader directory_loader(std::filesystem::path root);
/// Serves images[i] for manifest.seals[i]; both must outlive the loader.
ImageLoader memory_loader(const CorpusManifest& manifest, const std::vector<Image>& images);

/// Active subset from corpus-wide counts of the selected side plus augmentation.
std::vector<std::string> active_classes(const CorpusManifest& manifest, const RunConfig& config,
                                        const AlphabetRegistry& registry = default_registry());

/// Throws LeakageError when a training seal id is also a test id.
void assert_disjoint(std::span<const std::string> train_ids, std::span<const std::string> test_ids);

FoldReport run_fold(const CorpusManifest& manifest, const ImageLoader& images,
                    const FoldPlan& plan, int fold_index, const RunConfig& config,
                    const std::vector<std::string>& classes,
                    std::span<const std::string> augment_ids = {});

CVReport cross_validate(const CorpusManifest& manifest, const ImageLoader& images,
                        const RunConfig& config, std::optional<FoldPlan> plan = std::nullopt);

/// Unweighted fold means; NaN fold values are skipped.
OverallMetrics overall_metrics(std::span<const FoldReport> folds);

nlohmann::json to_json(const CVReport& r);
CVReport cv_report_from_json(const nlohmann::json& j);

// ---- rendering

/// Percentages with two decimals: "93.74 | 89.80 | 94.40 | 65.78".
std::string format_detection_row(const DetectionSummary& d);
std::string format_classification_row(double top1, double top2, double top3, double macro_f1);
/// Per-fold CERs then the fold mean, two decimals.
std::string format_cer_row(std::span<const double> fold_cers);

std::string render_tables(const CVReport& r);
std::string render_transcriptions(const CVReport& r,
                                  const AlphabetRegistry& registry = default_registry());
std::string render_seal_cer_csv(const CVReport& r);
std::string render_confusion_csv(const ConfusionMatrix& m, std::span<const std::string> classes);

/// Writes report.json, tables.md, per_seal_cer.csv, transcriptions.txt and
/// confusion CSVs into out_dir. Throws ValidationError on an empty report.
std::vector<std::filesystem::path> emit_report(const CVReport& r, const std::filesystem::path& out_dir);

}  // namespace sealread
