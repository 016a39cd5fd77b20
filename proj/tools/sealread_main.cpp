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

// sealread command-line driver.

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "sealread/alphabet.hpp"
#include "sealread/baseline.hpp"
#include "sealread/corpus.hpp"
#include "sealread/error.hpp"
#include "sealread/external.hpp"
#include "sealread/harness.hpp"
#include "sealread/lineify.hpp"
#include "sealread/metrics.hpp"
#include "sealread/synthseal.hpp"

namespace fs = std::filesystem;
using namespace sealread;
using nlohmann::json;

namespace {

struct Corpus {
  CorpusManifest manifest;
  fs::path root;
};

Corpus open_corpus(const std::string& arg) {
  fs::path p(arg);
  if (fs::is_directory(p)) p /= "manifest.json";
  Corpus c{load_manifest(p), p.parent_path()};
  return c;
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure(fmt::format("cannot write {}", path.string()));
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot read {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

// Run flags layered over an optional config file: flag > config > default.
struct RunFlags {
  std::string config_path;
  std::vector<std::function<void(RunConfig&)>> apply;

  template <class T, class Set>
  void add(CLI::App* app, const std::string& name, const std::string& help, Set set) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    apply.push_back([opt, value, set](RunConfig& c) {
      if (opt->count() > 0) set(c, *value);
    });
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) c = load_run_config(config_path, c);
    for (const auto& f : apply) f(c);
    c.validate();
    return c;
  }
};

void add_backend_flags(CLI::App* app, RunFlags& f) {
  f.add<std::string>(app, "--backend", "detector and classifier backend: baseline|external|oracle|null",
                     [](RunConfig& c, const std::string& v) {
                       c.detector = c.classifier = backend_from_string(v);
                     });
  f.add<std::string>(app, "--detector", "detector backend (overrides --backend)",
                     [](RunConfig& c, const std::string& v) { c.detector = backend_from_string(v); });
  f.add<std::string>(app, "--classifier", "classifier backend (overrides --backend)",
                     [](RunConfig& c, const std::string& v) { c.classifier = backend_from_string(v); });
  f.add<std::string>(app, "--detector-cmd", "command line of an external detector",
                     [](RunConfig& c, const std::string& v) { c.detector_command = v; });
  f.add<std::string>(app, "--classifier-cmd", "command line of an external classifier",
                     [](RunConfig& c, const std::string& v) { c.classifier_command = v; });
  f.add<double>(app, "--timeout", "seconds to wait for an external model",
                [](RunConfig& c, double v) { c.timeout_s = v; });
  f.add<double>(app, "--conf", "confidence threshold for kept detections",
                [](RunConfig& c, double v) { c.conf_threshold = v; });
  f.add<double>(app, "--crop-pad", "crop padding, fraction of max(w, h)",
                [](RunConfig& c, double v) { c.crop_pad = v; });
  f.add<int>(app, "--crop-size", "crop resolution in pixels",
             [](RunConfig& c, int v) { c.crop_size = v; });
  f.add<int>(app, "--jobs", "worker threads", [](RunConfig& c, int v) { c.jobs = v; });
}

void add_eval_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--config", f.config_path, "run configuration file (JSON)");
  add_backend_flags(app, f);
  f.add<double>(app, "--iou", "IoU threshold for a match",
                [](RunConfig& c, double v) { c.iou_threshold = v; });
  f.add<std::uint64_t>(app, "--seed", "random seed", [](RunConfig& c, std::uint64_t v) { c.seed = v; });
  f.add<int>(app, "--min-samples", "minimum corpus count for a class to be classified",
             [](RunConfig& c, int v) { c.min_samples = v; });
  f.add<int>(app, "--noncharacters", "non-character crops per fold",
             [](RunConfig& c, int v) { c.noncharacters = v; });
  f.add<std::string>(app, "--side", "reverse|obverse|all", [](RunConfig& c, const std::string& v) {
    c.side = v == "all" ? std::nullopt : std::optional<Side>(side_from_string(v));
  });
}

std::vector<const SealAnnotation*> select_seals(const Corpus& corpus, const std::string& plan_path,
                                                int fold, const RunConfig& c) {
  std::vector<const SealAnnotation*> out;
  if (!plan_path.empty()) {
    const auto plan = fold_plan_from_json(read_json(plan_path));
    return fold_split(plan, fold, corpus.manifest).test;
  }
  for (const auto& s : corpus.manifest.seals)
    if (!c.side || s.side == *c.side) out.push_back(&s);
  return out;
}

std::unique_ptr<Detector> make_detector(const RunConfig& c, const TemplateSet* t) {
  switch (c.detector) {
    case Backend::baseline:
      if (!t) throw ValidationError("the baseline detector needs --templates");
      return std::make_unique<BaselineDetector>(*t);
    case Backend::external:
      return std::make_unique<ExternalDetector>(ExternalOptions{c.detector_command, c.timeout_s});
    case Backend::oracle: return std::make_unique<OracleDetector>();
    case Backend::null: return std::make_unique<NullDetector>();
  }
  return nullptr;
}

std::unique_ptr<Classifier> make_classifier(const RunConfig& c, const TemplateSet* t,
                                            const std::vector<std::string>& classes) {
  switch (c.classifier) {
    case Backend::baseline:
      if (!t) throw ValidationError("the baseline classifier needs --templates");
      return std::make_unique<BaselineClassifier>(*t);
    case Backend::external:
      return std::make_unique<ExternalClassifier>(ExternalOptions{c.classifier_command, c.timeout_s},
                                                  classes);
    case Backend::oracle: return std::make_unique<OracleClassifier>(classes);
    case Backend::null: return std::make_unique<NullClassifier>(classes);
  }
  return nullptr;
}

// ---- subcommands

int cmd_generate(int n, std::uint64_t seed, const std::string& out, const std::string& config_path,
                 std::optional<double> wear, std::optional<int> occlusions) {
  CorpusConfig cfg;
  if (!config_path.empty()) cfg = corpus_config_from_json(read_json(config_path));
  if (wear) cfg.degradation.wear_fraction = *wear;
  if (occlusions) cfg.degradation.occlusion_discs = *occlusions;
  cfg.degradation.validate();
  if (n < 1) throw ValidationError("--n must be >= 1");
  const auto corpus = generate_corpus(cfg, n, seed);
  write_corpus(corpus, out);
  std::cout << fmt::format("wrote {} seals to {}\n", n, out);
  return 0;
}

int cmd_folds(const std::string& corpus_arg, int k, std::uint64_t seed, const std::string& side,
              const std::string& out) {
  const auto corpus = open_corpus(corpus_arg);
  const auto plan = make_folds(corpus.manifest, k, seed,
                               side == "all" ? std::nullopt : std::optional<Side>(side_from_string(side)));
  write_json(out, to_json(plan));
  for (int f = 0; f < plan.k; ++f)
    std::cout << fmt::format("fold {}: {} seals\n", f + 1, plan.folds[f].size());
  return 0;
}

int cmd_build_templates(const std::string& corpus_arg, const RunConfig& c, const std::string& plan_path,
                        int fold, const std::string& out) {
  const auto corpus = open_corpus(corpus_arg);
  std::vector<const SealAnnotation*> train;
  if (!plan_path.empty()) {
    train = fold_split(fold_plan_from_json(read_json(plan_path)), fold, corpus.manifest).train;
  } else {
    for (const auto& s : corpus.manifest.seals)
      if (!c.side || s.side == *c.side) train.push_back(&s);
  }
  std::vector<Image> images;
  for (const auto* s : train) images.push_back(load_seal_image(*s, corpus.root));
  std::vector<TrainingSeal> training;
  for (std::size_t i = 0; i < train.size(); ++i) training.push_back({train[i], &images[i]});
  const auto classes = active_classes(corpus.manifest, c);
  const auto t = build_templates(training, classes, c.crop_pad, c.crop_size, c.baseline);
  t.save(out);
  std::cout << fmt::format("{} templates over {} training seals, downsample {}\n", t.templates.size(),
                           train.size(), t.downsample);
  return 0;
}

std::optional<TemplateSet> maybe_templates(const std::string& dir) {
  if (dir.empty()) return std::nullopt;
  return TemplateSet::load(dir);
}

int cmd_detect_eval(const std::string& corpus_arg, const RunConfig& c, const std::string& templates_dir,
                    const std::string& plan_path, int fold, const std::string& out) {
  const auto corpus = open_corpus(corpus_arg);
  const auto templates = maybe_templates(templates_dir);
  auto detector = make_detector(c, templates ? &*templates : nullptr);
  std::vector<ImageDetections> images;
  std::size_t failed = 0;
  for (const auto* s : select_seals(corpus, plan_path, fold, c)) {
    ImageDetections im;
    for (const auto& ch : s->chars)
      if (ch.class_name != kNonCharacter) im.gts.push_back(ch.bbox);
    try {
      im.preds = detect(*detector, load_seal_image(*s, corpus.root), c.baseline.nms_threshold,
                        InferenceContext{s});
    } catch (const BackendError& e) {
      std::cerr << fmt::format("{}: {}\n", s->seal_id, e.what());
      ++failed;
      continue;
    }
    images.push_back(std::move(im));
  }
  if (images.empty()) throw RuntimeFailure("no seal could be evaluated");
  const auto pr = precision_recall(images, c.iou_threshold, c.conf_threshold);
  const auto m = map_range(images);
  std::cout << fmt::format("seals {} (failed {})\nprecision {:.4f}\nrecall {:.4f}\nmAP@0.5 {:.4f}\n"
                           "mAP@[0.5:0.95] {:.4f}\n",
                           images.size(), failed, pr.precision, pr.recall, m.map50, m.map5095);
  if (!out.empty())
    write_json(out, {{"seals", images.size()}, {"failed", failed}, {"precision", pr.precision},
                     {"recall", pr.recall}, {"map50", m.map50}, {"map5095", m.map5095}});
  return failed ? 2 : 0;
}

int cmd_classify_eval(const std::string& corpus_arg, const RunConfig& c, const std::string& templates_dir,
                      const std::string& plan_path, int fold, const std::string& out,
                      const std::string& confusion_csv) {
  const auto corpus = open_corpus(corpus_arg);
  const auto templates = maybe_templates(templates_dir);
  const auto classes = templates ? templates->classes : active_classes(corpus.manifest, c);
  auto classifier = make_classifier(c, templates ? &*templates : nullptr, classes);
  const auto seals = select_seals(corpus, plan_path, fold, c);
  std::vector<ClassScores> scores;
  std::vector<std::size_t> labels;
  const int n = static_cast<int>(seals.size());
  for (int i = 0; i < n; ++i) {
    const auto& s = *seals[static_cast<std::size_t>(i)];
    const Image image = load_seal_image(s, corpus.root);
    std::vector<std::pair<CharBox, std::size_t>> boxes;
    for (const auto& ch : s.chars) {
      auto it = std::find(classes.begin(), classes.end(), ch.class_name);
      if (it != classes.end() && ch.class_name != kNonCharacter)
        boxes.emplace_back(ch, static_cast<std::size_t>(it - classes.begin()));
    }
    const int n_nc = c.noncharacters / n + (i < c.noncharacters % n ? 1 : 0);
    for (const auto& b : sample_noncharacters(s, n_nc, noncharacter_seed(c.seed, fold, s.seal_id)).boxes)
      boxes.emplace_back(b, classes.size() - 1);
    for (const auto& [box, label] : boxes) {
      auto crop = crop_box(image, box.bbox, c.crop_pad, c.crop_size);
      if (!crop) continue;
      scores.push_back(classify(*classifier, *crop, c.crop_size, box.bbox, InferenceContext{&s}));
      labels.push_back(label);
    }
  }
  const auto summary = confusion_and_f1(scores, labels, classes.size());
  const double t1 = topk_accuracy(scores, labels, 1), t2 = topk_accuracy(scores, labels, 2),
               t3 = topk_accuracy(scores, labels, 3);
  std::cout << fmt::format("crops {}\ntop1 {:.4f}\ntop2 {:.4f}\ntop3 {:.4f}\nmacro-F1 {:.4f}\n"
                           "per-class mean acc {:.4f}\n",
                           scores.size(), t1, t2, t3, summary.macro_f1, summary.per_class_mean_acc);
  if (!out.empty())
    write_json(out, {{"crops", scores.size()}, {"top1", t1}, {"top2", t2}, {"top3", t3},
                     {"macro_f1", summary.macro_f1},
                     {"per_class_mean_acc", summary.per_class_mean_acc}});
  if (!confusion_csv.empty()) {
    std::ofstream f(confusion_csv);
    if (!f) throw RuntimeFailure(fmt::format("cannot write {}", confusion_csv));
    f << render_confusion_csv(summary.confusion, classes);
  }
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_transcribe(const std::string& image_path, const RunConfig& c, const std::string& templates_dir,
                   const std::string& classes_arg) {
  const auto templates = maybe_templates(templates_dir);
  std::vector<std::string> classes;
  if (!classes_arg.empty()) classes = split_list(classes_arg);
  else if (templates) classes = templates->classes;
  else throw ValidationError("transcribe needs --templates or --classes to fix the class subset");
  if (classes.empty() || classes.back() != kNonCharacter) classes.emplace_back(kNonCharacter);
  if (c.detector == Backend::oracle || c.classifier == Backend::oracle)
    throw ValidationError("the oracle backend needs annotations; transcribe works on bare images");
  const Image image = read_png(image_path);
  auto detector = make_detector(c, templates ? &*templates : nullptr);
  auto classifier = make_classifier(c, templates ? &*templates : nullptr, classes);
  std::vector<LabeledDetection> labeled;
  for (const auto& d : detect(*detector, image, c.baseline.nms_threshold)) {
    if (d.confidence < c.conf_threshold) continue;
    auto crop = crop_box(image, d.bbox, c.crop_pad, c.crop_size);
    if (crop) labeled.push_back({d, classify(*classifier, *crop, c.crop_size, d.bbox)});
  }
  HoughParams hough = c.hough;
  hough.aspect_ratio = static_cast<double>(image.width()) / image.height();
  const auto& registry = default_registry();
  for (const auto& line : transcribe(labeled, classes, hough).lines) {
    std::string text;
    for (const auto& name : line) text += to_utf8(registry.lookup(name).codepoints);
    std::cout << text << '\n';
  }
  return 0;
}

int cmd_cross_validate(const std::string& corpus_arg, const RunConfig& c, const std::string& plan_path,
                       const std::string& out) {
  const auto corpus = open_corpus(corpus_arg);
  std::optional<FoldPlan> plan;
  if (!plan_path.empty()) plan = fold_plan_from_json(read_json(plan_path));
  const auto report = cross_validate(corpus.manifest, directory_loader(corpus.root), c, plan);
  emit_report(report, out);
  std::cout << render_tables(report);
  return report.overall.failed ? 2 : 0;
}

int cmd_report(const std::string& in, const std::string& out) {
  fs::path p(in);
  if (fs::is_directory(p)) p /= "report.json";
  const auto report = cv_report_from_json(read_json(p));
  if (!out.empty()) emit_report(report, out);
  std::cout << render_tables(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sealread: character localization, classification and transcription on seal images"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sealread 1.0.0");

  // generate
  auto* gen = app.add_subcommand("generate", "render a synthetic seal corpus");
  int gen_n = 20;
  std::uint64_t gen_seed = 1;
  std::string gen_out, gen_config;
  std::optional<double> gen_wear;
  std::optional<int> gen_occ;
  int gen_jobs = 1;
  gen->add_option("--n", gen_n, "number of seals")->capture_default_str();
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--config", gen_config, "corpus configuration file (JSON)");
  gen->add_option("--wear", gen_wear, "fraction of glyph relief worn away");
  gen->add_option("--occlusions", gen_occ, "occlusion discs per seal");
  gen->add_option("--jobs", gen_jobs, "worker threads")->capture_default_str();

  // folds
  auto* folds = app.add_subcommand("folds", "draw a seal-level K-fold plan");
  std::string folds_corpus, folds_out, folds_side = "reverse";
  int folds_k = 10;
  std::uint64_t folds_seed = 42;
  folds->add_option("--corpus", folds_corpus, "corpus directory or manifest")->required();
  folds->add_option("--k", folds_k, "number of folds")->capture_default_str();
  folds->add_option("--seed", folds_seed, "random seed")->capture_default_str();
  folds->add_option("--side", folds_side, "reverse|obverse|all")->capture_default_str();
  folds->add_option("--out", folds_out, "output plan file")->required();

  // build-templates
  auto* bt = app.add_subcommand("build-templates", "build baseline class templates from a corpus");
  RunFlags bt_flags;
  std::string bt_corpus, bt_plan, bt_out;
  int bt_fold = 0;
  bt->add_option("--corpus", bt_corpus, "corpus directory or manifest")->required();
  bt->add_option("--plan", bt_plan, "fold plan; train on every fold but --fold");
  bt->add_option("--fold", bt_fold, "held-out fold index (0-based)")->capture_default_str();
  bt->add_option("--out", bt_out, "output directory")->required();
  add_eval_flags(bt, bt_flags);

  // detect-eval
  auto* de = app.add_subcommand("detect-eval", "evaluate character localization");
  RunFlags de_flags;
  std::string de_corpus, de_templates, de_plan, de_out;
  int de_fold = 0;
  de->add_option("--corpus", de_corpus, "corpus directory or manifest")->required();
  de->add_option("--templates", de_templates, "baseline template directory");
  de->add_option("--plan", de_plan, "fold plan; evaluate only --fold");
  de->add_option("--fold", de_fold, "fold index (0-based)")->capture_default_str();
  de->add_option("--out", de_out, "metrics file (JSON)");
  add_eval_flags(de, de_flags);

  // classify-eval
  auto* ce = app.add_subcommand("classify-eval", "evaluate classification on ground-truth crops");
  RunFlags ce_flags;
  std::string ce_corpus, ce_templates, ce_plan, ce_out, ce_confusion;
  int ce_fold = 0;
  ce->add_option("--corpus", ce_corpus, "corpus directory or manifest")->required();
  ce->add_option("--templates", ce_templates, "baseline template directory");
  ce->add_option("--plan", ce_plan, "fold plan; evaluate only --fold");
  ce->add_option("--fold", ce_fold, "fold index (0-based)")->capture_default_str();
  ce->add_option("--out", ce_out, "metrics file (JSON)");
  ce->add_option("--confusion", ce_confusion, "top-1 confusion matrix (CSV)");
  add_eval_flags(ce, ce_flags);

  // transcribe
  auto* tr = app.add_subcommand("transcribe", "transcribe one seal image");
  RunFlags tr_flags;
  std::string tr_image, tr_templates, tr_classes;
  tr->add_option("--image", tr_image, "seal image (PNG)")->required();
  tr->add_option("--templates", tr_templates, "baseline template directory");
  tr->add_option("--classes", tr_classes, "comma-separated class subset for an external classifier");
  tr->add_option("--config", tr_flags.config_path, "run configuration file (JSON)");
  add_backend_flags(tr, tr_flags);

  // cross-validate
  auto* cv = app.add_subcommand("cross-validate", "run the full K-fold evaluation");
  RunFlags cv_flags;
  std::string cv_corpus, cv_plan, cv_out;
  cv->add_option("--corpus", cv_corpus, "corpus directory or manifest")->required();
  cv->add_option("--plan", cv_plan, "fold plan (default: drawn from --k and --seed)");
  cv->add_option("--out", cv_out, "report directory")->required();
  add_eval_flags(cv, cv_flags);
  cv_flags.add<int>(cv, "--k", "number of folds", [](RunConfig& c, int v) { c.k = v; });
  cv_flags.add<int>(cv, "--augment-obverse", "obverse seals added to every training set",
                    [](RunConfig& c, int v) { c.augment_obverse = v; });

  // report
  auto* rep = app.add_subcommand("report", "re-render a stored report");
  std::string rep_in, rep_out;
  rep->add_option("--in", rep_in, "report.json or its directory")->required();
  rep->add_option("--out", rep_out, "directory for the re-rendered files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    auto jobs_of = [](const RunConfig& c) {
      omp_set_num_threads(c.jobs);
      return c;
    };
    if (gen->parsed()) {
      omp_set_num_threads(std::max(1, gen_jobs));
      return cmd_generate(gen_n, gen_seed, gen_out, gen_config, gen_wear, gen_occ);
    }
    if (folds->parsed()) return cmd_folds(folds_corpus, folds_k, folds_seed, folds_side, folds_out);
    if (bt->parsed())
      return cmd_build_templates(bt_corpus, jobs_of(bt_flags.resolve()), bt_plan, bt_fold, bt_out);
    if (de->parsed())
      return cmd_detect_eval(de_corpus, jobs_of(de_flags.resolve()), de_templates, de_plan, de_fold,
                             de_out);
    if (ce->parsed())
      return cmd_classify_eval(ce_corpus, jobs_of(ce_flags.resolve()), ce_templates, ce_plan, ce_fold,
                               ce_out, ce_confusion);
    if (tr->parsed())
      return cmd_transcribe(tr_image, jobs_of(tr_flags.resolve()), tr_templates, tr_classes);
    if (cv->parsed()) return cmd_cross_validate(cv_corpus, cv_flags.resolve(), cv_plan, cv_out);
    if (rep->parsed()) return cmd_report(rep_in, rep_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const LeakageError& e) {
    std::cerr << "leakage: " << e.what() << '\n';
    return 2;
  } catch (const RuntimeFailure& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
