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

#include "sealread/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <set>

#include <fmt/format.h>
#include <omp.h>

#include "sealread/error.hpp"
#include "sealread/external.hpp"

namespace sealread {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Models {
  std::unique_ptr<Detector> detector;
  std::unique_ptr<Classifier> classifier;
};

Models make_models(const RunConfig& c, const TemplateSet* templates,
                   const std::vector<std::string>& classes) {
  Models m;
  switch (c.detector) {
    case Backend::baseline: m.detector = std::make_unique<BaselineDetector>(*templates); break;
    case Backend::external:
      m.detector = std::make_unique<ExternalDetector>(ExternalOptions{c.detector_command, c.timeout_s});
      break;
    case Backend::oracle: m.detector = std::make_unique<OracleDetector>(); break;
    case Backend::null: m.detector = std::make_unique<NullDetector>(); break;
  }
  switch (c.classifier) {
    case Backend::baseline: m.classifier = std::make_unique<BaselineClassifier>(*templates); break;
    case Backend::external:
      m.classifier = std::make_unique<ExternalClassifier>(
          ExternalOptions{c.classifier_command, c.timeout_s}, classes);
      break;
    case Backend::oracle: m.classifier = std::make_unique<OracleClassifier>(classes); break;
    case Backend::null: m.classifier = std::make_unique<NullClassifier>(classes); break;
  }
  return m;
}

struct SealEval {
  SealResult result;
  ImageDetections detections;
  std::vector<ClassScores> scores;
  std::vector<std::size_t> labels;
  std::vector<std::string> warnings;
};

std::vector<std::vector<std::string>> ground_truth_lines(const SealAnnotation& seal,
                                                         const HoughParams& hough) {
  if (seal.transcription_gt) return *seal.transcription_gt;
  std::vector<LabeledDetection> gt;
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  for (const auto& c : seal.chars) {
    if (c.class_name == kNonCharacter) continue;
    auto [it, fresh] = index.emplace(c.class_name, names.size());
    if (fresh) names.push_back(c.class_name);
  }
  names.emplace_back(kNonCharacter);
  for (const auto& c : seal.chars) {
    if (c.class_name == kNonCharacter) continue;
    ClassScores s;
    s.scores.assign(names.size(), 0.0);
    s.scores[index[c.class_name]] = 1.0;
    gt.push_back({{c.bbox, 1.0}, std::move(s)});
  }
  return transcribe(gt, names, hough).lines;
}

SealEval evaluate_seal(const SealAnnotation& seal, const Image& image, Models& models,
                       const RunConfig& c, const std::vector<std::string>& classes,
                       const FoldPlan& plan, int fold, int n_noncharacters) {
  SealEval ev;
  ev.result.seal_id = seal.seal_id;
  const InferenceContext ctx{&seal};
  for (const auto& ch : seal.chars)
    if (ch.class_name != kNonCharacter) ev.detections.gts.push_back(ch.bbox);

  // Localization.
  ev.detections.preds = detect(*models.detector, image, c.baseline.nms_threshold, ctx);
  ev.result.detections = ev.detections.preds.size();

  // Classification on ground-truth crops plus sampled non-characters.
  auto label_of = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(classes.begin(), classes.end(), name);
    if (it == classes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - classes.begin());
  };
  auto classify_box = [&](const CharBox& box, std::size_t label) {
    auto crop = crop_box(image, box.bbox, c.crop_pad, c.crop_size);
    if (!crop) {
      ev.warnings.push_back(fmt::format("{}: degenerate crop skipped", seal.seal_id));
      return;
    }
    ev.scores.push_back(classify(*models.classifier, *crop, c.crop_size, box.bbox, ctx));
    ev.labels.push_back(label);
  };
  for (const auto& ch : seal.chars) {
    if (ch.class_name == kNonCharacter) continue;
    if (auto label = label_of(ch.class_name)) classify_box(ch, *label);
  }
  if (n_noncharacters > 0) {
    auto sample = sample_noncharacters(seal, n_noncharacters,
                                       noncharacter_seed(plan.seed, fold, seal.seal_id));
    if (sample.warning) ev.warnings.push_back(fmt::format("{}: {}", seal.seal_id, *sample.warning));
    for (const auto& box : sample.boxes) classify_box(box, classes.size() - 1);
  }

  // Transcription.
  std::vector<LabeledDetection> labeled;
  for (const auto& d : ev.detections.preds) {
    if (d.confidence < c.conf_threshold) continue;
    auto crop = crop_box(image, d.bbox, c.crop_pad, c.crop_size);
    if (!crop) continue;
    labeled.push_back({d, classify(*models.classifier, *crop, c.crop_size, d.bbox, ctx)});
  }
  HoughParams hough = c.hough;
  hough.aspect_ratio = static_cast<double>(seal.image_w) / seal.image_h;
  ev.result.predicted = transcribe(labeled, classes, hough).lines;
  ev.result.ground_truth = ground_truth_lines(seal, hough);
  std::vector<std::string> pred_flat, gt_flat;
  for (const auto& l : ev.result.predicted) pred_flat.insert(pred_flat.end(), l.begin(), l.end());
  for (const auto& l : ev.result.ground_truth) gt_flat.insert(gt_flat.end(), l.begin(), l.end());
  if (gt_flat.empty()) throw ValidationError(fmt::format("seal '{}' has no characters", seal.seal_id));
  ev.result.edits = levenshtein(pred_flat, gt_flat);
  ev.result.cer = cer(ev.result.edits);
  return ev;
}

double finite_mean(std::span<const double> v) {
  double s = 0;
  std::size_t n = 0;
  for (double x : v)
    if (std::isfinite(x)) s += x, ++n;
  return n ? s / double(n) : kNaN;
}

}  // namespace

ImageLoader directory_loader(std::filesystem::path root) {
  return [root = std::move(root)](const SealAnnotation& seal) { return load_seal_image(seal, root); };
}

ImageLoader memory_loader(const CorpusManifest& manifest, const std::vector<Image>& images) {
  if (manifest.seals.size() != images.size())
    throw ValidationError("memory_loader: one image per seal expected");
  std::map<std::string, const Image*> by_id;
  for (std::size_t i = 0; i < images.size(); ++i) by_id[manifest.seals[i].seal_id] = &images[i];
  return [by_id = std::move(by_id)](const SealAnnotation& seal) {
    auto it = by_id.find(seal.seal_id);
    if (it == by_id.end()) throw RuntimeFailure(fmt::format("no image for seal '{}'", seal.seal_id));
    return *it->second;
  };
}

std::vector<std::string> active_classes(const CorpusManifest& manifest, const RunConfig& config,
                                        const AlphabetRegistry& registry) {
  const auto counts = class_counts(manifest, config.side);
  std::vector<std::string> names;
  for (const auto& c : classification_subset(registry, counts, config.min_samples))
    names.push_back(c.name);
  return names;
}

void assert_disjoint(std::span<const std::string> train_ids, std::span<const std::string> test_ids) {
  const std::set<std::string> test(test_ids.begin(), test_ids.end());
  for (const auto& id : train_ids)
    if (test.count(id))
      throw LeakageError(fmt::format("seal '{}' is in both the training and the test set", id));
}

FoldReport run_fold(const CorpusManifest& manifest, const ImageLoader& images,
                    const FoldPlan& plan, int fold_index, const RunConfig& config,
                    const std::vector<std::string>& classes,
                    std::span<const std::string> augment_ids) {
  config.validate();
  if (classes.empty() || classes.back() != kNonCharacter)
    throw ValidationError("run_fold: class list must end with NON_CHARACTER");
  const auto split = fold_split(plan, fold_index, manifest, augment_ids);
  FoldReport fr;
  fr.fold_index = fold_index;
  for (const auto* s : split.train) fr.train_ids.push_back(s->seal_id);
  for (const auto* s : split.test) fr.test_ids.push_back(s->seal_id);
  assert_disjoint(fr.train_ids, fr.test_ids);

  // Per-fold "training": class templates from the training seals only.
  std::optional<TemplateSet> templates;
  if (config.detector == Backend::baseline || config.classifier == Backend::baseline) {
    std::vector<Image> train_images;
    train_images.reserve(split.train.size());
    for (const auto* s : split.train) train_images.push_back(images(*s));
    std::vector<TrainingSeal> training;
    for (std::size_t i = 0; i < split.train.size(); ++i)
      training.push_back({split.train[i], &train_images[i]});
    templates = build_templates(training, classes, config.crop_pad, config.crop_size, config.baseline);
  }

  // Non-characters per fold, spread over test seals (remainder to the first ones).
  const int n_test = static_cast<int>(split.test.size());
  std::vector<SealEval> evals(split.test.size());
  std::exception_ptr fatal;
#pragma omp parallel num_threads(config.jobs)
  {
    std::optional<Models> models;
    try {
      models = make_models(config, templates ? &*templates : nullptr, classes);
    } catch (...) {
#pragma omp critical(sealread_fatal)
      if (!fatal) fatal = std::current_exception();
    }
#pragma omp for schedule(dynamic, 1)
    for (int i = 0; i < n_test; ++i) {
      if (!models) continue;
      const auto& seal = *split.test[static_cast<std::size_t>(i)];
      const int n_nc = config.noncharacters / n_test + (i < config.noncharacters % n_test ? 1 : 0);
      try {
        const Image image = images(seal);
        evals[static_cast<std::size_t>(i)] =
            evaluate_seal(seal, image, *models, config, classes, plan, fold_index, n_nc);
      } catch (const RuntimeFailure& e) {
        auto& r = evals[static_cast<std::size_t>(i)].result;
        r.seal_id = seal.seal_id;
        r.failed = true;
        r.error = e.what();
      } catch (...) {
#pragma omp critical(sealread_fatal)
        if (!fatal) fatal = std::current_exception();
      }
    }
  }
  if (fatal) std::rethrow_exception(fatal);

  std::vector<ImageDetections> det;
  std::vector<ClassScores> scores;
  std::vector<std::size_t> labels;
  std::vector<double> cers;
  for (auto& ev : evals) {
    fr.warnings.insert(fr.warnings.end(), ev.warnings.begin(), ev.warnings.end());
    if (ev.result.failed) {
      ++fr.failed;
      fr.warnings.push_back(fmt::format("{}: failed: {}", ev.result.seal_id, ev.result.error));
    } else {
      det.push_back(std::move(ev.detections));
      scores.insert(scores.end(), ev.scores.begin(), ev.scores.end());
      labels.insert(labels.end(), ev.labels.begin(), ev.labels.end());
      cers.push_back(ev.result.cer);
    }
    fr.seals.push_back(std::move(ev.result));
  }

  std::size_t n_gt = 0;
  for (const auto& d : det) n_gt += d.gts.size();
  if (n_gt > 0) {
    const auto pr = precision_recall(det, config.iou_threshold, config.conf_threshold);
    fr.detection.precision = pr.precision;
    fr.detection.recall = pr.recall;
    std::vector<double> thresholds = coco_thresholds();
    const auto m = map_range(det, thresholds);
    fr.detection.map50 = config.iou_threshold == 0.5 ? m.map50
                                                     : average_precision(det, config.iou_threshold);
    fr.detection.map5095 = m.map5095;
  } else {
    fr.detection = {kNaN, kNaN, kNaN, kNaN};
  }

  auto& cr = fr.classification;
  cr.samples = scores.size();
  if (!scores.empty()) {
    cr.top1 = topk_accuracy(scores, labels, 1);
    cr.top2 = topk_accuracy(scores, labels, 2);
    cr.top3 = topk_accuracy(scores, labels, 3);
    const auto summary = confusion_and_f1(scores, labels, classes.size());
    cr.macro_f1 = summary.macro_f1;
    cr.per_class_mean_acc = summary.per_class_mean_acc;
    cr.confusion = summary.confusion;
    cr.confusion_top3 = topk_confusion(scores, labels, classes.size(), 3);
    for (auto c : summary.excluded) cr.excluded.push_back(classes[c]);
  } else {
    cr.top1 = cr.top2 = cr.top3 = cr.macro_f1 = cr.per_class_mean_acc = kNaN;
  }
  fr.cer = cers.empty() ? kNaN : mean(cers);
  return fr;
}

OverallMetrics overall_metrics(std::span<const FoldReport> folds) {
  if (folds.empty()) throw ValidationError("no folds to aggregate");
  OverallMetrics o;
  auto avg = [&](auto get) {
    std::vector<double> v;
    for (const auto& f : folds) v.push_back(get(f));
    return finite_mean(v);
  };
  o.detection.precision = avg([](const FoldReport& f) { return f.detection.precision; });
  o.detection.recall = avg([](const FoldReport& f) { return f.detection.recall; });
  o.detection.map50 = avg([](const FoldReport& f) { return f.detection.map50; });
  o.detection.map5095 = avg([](const FoldReport& f) { return f.detection.map5095; });
  o.top1 = avg([](const FoldReport& f) { return f.classification.top1; });
  o.top2 = avg([](const FoldReport& f) { return f.classification.top2; });
  o.top3 = avg([](const FoldReport& f) { return f.classification.top3; });
  o.macro_f1 = avg([](const FoldReport& f) { return f.classification.macro_f1; });
  o.per_class_mean_acc = avg([](const FoldReport& f) { return f.classification.per_class_mean_acc; });
  o.cer = avg([](const FoldReport& f) { return f.cer; });
  for (const auto& f : folds) o.failed += f.failed;
  return o;
}

CVReport cross_validate(const CorpusManifest& manifest, const ImageLoader& images,
                        const RunConfig& config, std::optional<FoldPlan> plan) {
  config.validate();
  CVReport r;
  r.config = config;
  r.plan = plan ? std::move(*plan) : make_folds(manifest, config.k, config.seed, config.side);
  r.augment_ids = select_augmentation(manifest, r.plan, config.augment_obverse, config.seed);
  r.classes = active_classes(manifest, config);
  for (int f = 0; f < r.plan.k; ++f)
    r.folds.push_back(run_fold(manifest, images, r.plan, f, config, r.classes, r.augment_ids));
  r.overall = overall_metrics(r.folds);
  return r;
}

}  // namespace sealread
