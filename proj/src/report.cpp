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
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "sealread/error.hpp"
#include "sealread/harness.hpp"

namespace sealread {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_num(const json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

json to_json(const DetectionSummary& d) {
  return {{"precision", num(d.precision)}, {"recall", num(d.recall)},
          {"map50", num(d.map50)},         {"map5095", num(d.map5095)}};
}

DetectionSummary detection_from_json(const json& j) {
  return {get_num(j, "precision"), get_num(j, "recall"), get_num(j, "map50"), get_num(j, "map5095")};
}

json to_json(const ConfusionMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.n; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.n; ++c) row.push_back(m.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

ConfusionMatrix confusion_from_json(const json& j) {
  ConfusionMatrix m;
  m.n = j.size();
  for (const auto& row : j) {
    if (row.size() != m.n) throw ValidationError("report: confusion matrix is not square");
    for (const auto& v : row) m.counts.push_back(v.get<std::int64_t>());
  }
  return m;
}

json to_json(const EditCounts& e) { return {{"S", e.S}, {"D", e.D}, {"I", e.I}, {"N", e.N}}; }

json to_json(const SealResult& s) {
  json j{{"seal_id", s.seal_id}, {"failed", s.failed}};
  if (s.failed) {
    j["error"] = s.error;
    return j;
  }
  j["detections"] = s.detections;
  j["predicted"] = s.predicted;
  j["ground_truth"] = s.ground_truth;
  j["edits"] = to_json(s.edits);
  j["cer"] = num(s.cer);
  return j;
}

SealResult seal_from_json(const json& j) {
  SealResult s;
  s.seal_id = j.at("seal_id").get<std::string>();
  s.failed = j.at("failed").get<bool>();
  if (s.failed) {
    s.error = j.value("error", "");
    return s;
  }
  s.detections = j.at("detections").get<std::size_t>();
  s.predicted = j.at("predicted").get<std::vector<std::vector<std::string>>>();
  s.ground_truth = j.at("ground_truth").get<std::vector<std::vector<std::string>>>();
  const auto& e = j.at("edits");
  s.edits = {e.at("S").get<std::size_t>(), e.at("D").get<std::size_t>(),
             e.at("I").get<std::size_t>(), e.at("N").get<std::size_t>()};
  s.cer = get_num(j, "cer");
  return s;
}

json to_json(const FoldReport& f) {
  json seals = json::array();
  for (const auto& s : f.seals) seals.push_back(to_json(s));
  const auto& c = f.classification;
  return {{"fold_index", f.fold_index},
          {"train_ids", f.train_ids},
          {"test_ids", f.test_ids},
          {"detection", to_json(f.detection)},
          {"classification",
           {{"samples", c.samples},
            {"top1", num(c.top1)},
            {"top2", num(c.top2)},
            {"top3", num(c.top3)},
            {"macro_f1", num(c.macro_f1)},
            {"per_class_mean_acc", num(c.per_class_mean_acc)},
            {"confusion", to_json(c.confusion)},
            {"confusion_top3", to_json(c.confusion_top3)},
            {"excluded", c.excluded}}},
          {"transcription", {{"cer", num(f.cer)}, {"failed", f.failed}, {"seals", std::move(seals)}}},
          {"warnings", f.warnings}};
}

FoldReport fold_from_json(const json& j) {
  FoldReport f;
  f.fold_index = j.at("fold_index").get<int>();
  f.train_ids = j.at("train_ids").get<std::vector<std::string>>();
  f.test_ids = j.at("test_ids").get<std::vector<std::string>>();
  f.detection = detection_from_json(j.at("detection"));
  const auto& c = j.at("classification");
  auto& cr = f.classification;
  cr.samples = c.at("samples").get<std::size_t>();
  cr.top1 = get_num(c, "top1");
  cr.top2 = get_num(c, "top2");
  cr.top3 = get_num(c, "top3");
  cr.macro_f1 = get_num(c, "macro_f1");
  cr.per_class_mean_acc = get_num(c, "per_class_mean_acc");
  cr.confusion = confusion_from_json(c.at("confusion"));
  cr.confusion_top3 = confusion_from_json(c.at("confusion_top3"));
  cr.excluded = c.at("excluded").get<std::vector<std::string>>();
  const auto& t = j.at("transcription");
  f.cer = get_num(t, "cer");
  f.failed = t.at("failed").get<std::size_t>();
  for (const auto& s : t.at("seals")) f.seals.push_back(seal_from_json(s));
  f.warnings = j.at("warnings").get<std::vector<std::string>>();
  return f;
}

std::string pct(double v) { return std::isfinite(v) ? fmt::format("{:.2f}", 100.0 * v) : "n/a"; }
std::string dec(double v) { return std::isfinite(v) ? fmt::format("{:.2f}", v) : "n/a"; }

std::string line_text(const std::vector<std::string>& names, const AlphabetRegistry& registry) {
  std::string out;
  for (const auto& n : names) {
    const auto* c = registry.find(n);
    out += c ? to_utf8(c->codepoints) : "?";
  }
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw RuntimeFailure(fmt::format("cannot write {}", p.string()));
  out << text;
  if (!out) throw RuntimeFailure(fmt::format("write failed: {}", p.string()));
}

}  // namespace

json to_json(const CVReport& r) {
  json folds = json::array();
  for (const auto& f : r.folds) folds.push_back(to_json(f));
  const auto& o = r.overall;
  return {{"format", "sealread-report"},
          {"format_version", 1},
          {"config", to_json(r.config)},
          {"classes", r.classes},
          {"plan", to_json(r.plan)},
          {"augment_ids", r.augment_ids},
          {"folds", std::move(folds)},
          {"overall",
           {{"detection", to_json(o.detection)},
            {"top1", num(o.top1)},
            {"top2", num(o.top2)},
            {"top3", num(o.top3)},
            {"macro_f1", num(o.macro_f1)},
            {"per_class_mean_acc", num(o.per_class_mean_acc)},
            {"cer", num(o.cer)},
            {"failed", o.failed}}}};
}

CVReport cv_report_from_json(const json& j) {
  try {
    if (j.value("format", "") != "sealread-report") throw ValidationError("not a sealread report");
    CVReport r;
    r.config = run_config_from_json(j.at("config"));
    r.classes = j.at("classes").get<std::vector<std::string>>();
    r.plan = fold_plan_from_json(j.at("plan"));
    r.augment_ids = j.at("augment_ids").get<std::vector<std::string>>();
    for (const auto& f : j.at("folds")) r.folds.push_back(fold_from_json(f));
    const auto& o = j.at("overall");
    r.overall.detection = detection_from_json(o.at("detection"));
    r.overall.top1 = get_num(o, "top1");
    r.overall.top2 = get_num(o, "top2");
    r.overall.top3 = get_num(o, "top3");
    r.overall.macro_f1 = get_num(o, "macro_f1");
    r.overall.per_class_mean_acc = get_num(o, "per_class_mean_acc");
    r.overall.cer = get_num(o, "cer");
    r.overall.failed = o.at("failed").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("report: {}", e.what()));
  }
}

std::string format_detection_row(const DetectionSummary& d) {
  return fmt::format("{} | {} | {} | {}", pct(d.precision), pct(d.recall), pct(d.map50),
                     pct(d.map5095));
}

std::string format_classification_row(double top1, double top2, double top3, double macro_f1) {
  return fmt::format("{} | {} | {} | {}", pct(top1), pct(top2), pct(top3), pct(macro_f1));
}

std::string format_cer_row(std::span<const double> fold_cers) {
  std::vector<double> finite;
  std::string row;
  for (double v : fold_cers) {
    row += dec(v) + " | ";
    if (std::isfinite(v)) finite.push_back(v);
  }
  row += finite.empty() ? "n/a" : dec(mean(finite));
  return row;
}

std::string render_tables(const CVReport& r) {
  if (r.folds.empty()) throw ValidationError("report has no folds");
  std::string s;
  s += "## Character localization\n\n";
  s += "| Fold | Precision | Recall | mAP@0.5 | mAP@[0.5:0.95] |\n|---|---|---|---|---|\n";
  for (const auto& f : r.folds)
    s += fmt::format("| {} | {} |\n", f.fold_index + 1, format_detection_row(f.detection));
  s += fmt::format("| Overall | {} |\n\n", format_detection_row(r.overall.detection));

  s += "## Character classification\n\n";
  s += "| Fold | Top-1 acc. | Top-2 acc. | Top-3 acc. | F1-score |\n|---|---|---|---|---|\n";
  for (const auto& f : r.folds) {
    const auto& c = f.classification;
    s += fmt::format("| {} | {} |\n", f.fold_index + 1,
                     format_classification_row(c.top1, c.top2, c.top3, c.macro_f1));
  }
  const auto& o = r.overall;
  s += fmt::format("| Overall | {} |\n\n", format_classification_row(o.top1, o.top2, o.top3, o.macro_f1));
  s += fmt::format("Mean per-class accuracy: {}\n\n", pct(o.per_class_mean_acc));

  s += "## Transcription CER\n\n|";
  for (const auto& f : r.folds) s += fmt::format(" {} |", f.fold_index + 1);
  s += " Overall |\n|";
  for (std::size_t i = 0; i <= r.folds.size(); ++i) s += "---|";
  std::vector<double> cers;
  for (const auto& f : r.folds) cers.push_back(f.cer);
  s += fmt::format("\n| {} |\n", format_cer_row(cers));
  if (o.failed) s += fmt::format("\n{} seal(s) failed and are excluded from the means.\n", o.failed);
  return s;
}

std::string render_transcriptions(const CVReport& r, const AlphabetRegistry& registry) {
  std::string s;
  for (const auto& f : r.folds) {
    for (const auto& seal : f.seals) {
      s += fmt::format("== {} (fold {})", seal.seal_id, f.fold_index + 1);
      if (seal.failed) {
        s += fmt::format(" FAILED: {}\n\n", seal.error);
        continue;
      }
      s += fmt::format(" CER {:.4f}\n", seal.cer);
      const std::size_t n = std::max(seal.predicted.size(), seal.ground_truth.size());
      for (std::size_t i = 0; i < n; ++i) {
        const auto pred = i < seal.predicted.size() ? line_text(seal.predicted[i], registry) : "";
        const auto gt = i < seal.ground_truth.size() ? line_text(seal.ground_truth[i], registry) : "";
        s += fmt::format("  pred: {}\n  gt:   {}\n", pred, gt);
      }
      s += "\n";
    }
  }
  return s;
}

std::string render_seal_cer_csv(const CVReport& r) {
  std::string s = "fold,seal_id,cer,status\n";
  for (const auto& f : r.folds)
    for (const auto& seal : f.seals)
      s += seal.failed ? fmt::format("{},{},,failed\n", f.fold_index + 1, seal.seal_id)
                       : fmt::format("{},{},{:.6f},ok\n", f.fold_index + 1, seal.seal_id, seal.cer);
  return s;
}

std::string render_confusion_csv(const ConfusionMatrix& m, std::span<const std::string> classes) {
  if (m.n != classes.size()) throw ValidationError("confusion matrix and class list differ in size");
  std::string s = "true\\pred";
  for (const auto& c : classes) s += "," + c;
  s += "\n";
  for (std::size_t r = 0; r < m.n; ++r) {
    s += classes[r];
    for (std::size_t c = 0; c < m.n; ++c) s += fmt::format(",{}", m.at(r, c));
    s += "\n";
  }
  return s;
}

std::vector<std::filesystem::path> emit_report(const CVReport& r, const std::filesystem::path& out_dir) {
  if (r.folds.empty()) throw ValidationError("refusing to write a report with no folds");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw RuntimeFailure(fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    write_file(out_dir / name, text);
    written.push_back(out_dir / name);
  };
  put("report.json", to_json(r).dump(2) + "\n");
  put("tables.md", render_tables(r));
  put("per_seal_cer.csv", render_seal_cer_csv(r));
  put("transcriptions.txt", render_transcriptions(r));
  for (const auto& f : r.folds) {
    if (f.classification.confusion.n != r.classes.size()) continue;
    put(fmt::format("confusion_top1_fold{}.csv", f.fold_index + 1),
        render_confusion_csv(f.classification.confusion, r.classes));
    put(fmt::format("confusion_top3_fold{}.csv", f.fold_index + 1),
        render_confusion_csv(f.classification.confusion_top3, r.classes));
  }
  return written;
}

}  // namespace sealread
