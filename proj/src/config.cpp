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

#include <fstream>

#include <fmt/format.h>

#include "sealread/error.hpp"
#include "sealread/harness.hpp"

namespace sealread {

using nlohmann::json;

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::baseline: return "baseline";
    case Backend::external: return "external";
    case Backend::oracle: return "oracle";
    case Backend::null: return "null";
  }
  return "?";
}

Backend backend_from_string(std::string_view s) {
  if (s == "baseline") return Backend::baseline;
  if (s == "external") return Backend::external;
  if (s == "oracle") return Backend::oracle;
  if (s == "null") return Backend::null;
  throw ValidationError(
      fmt::format("unknown backend '{}' (expected baseline, external, oracle or null)", s));
}

void RunConfig::validate() const {
  auto bad = [](std::string msg) { throw ValidationError("config: " + msg); };
  if (k < 2) bad("k must be >= 2");
  if (!(iou_threshold > 0 && iou_threshold <= 1)) bad("iou_threshold must be in (0, 1]");
  if (!(conf_threshold >= 0 && conf_threshold <= 1)) bad("conf_threshold must be in [0, 1]");
  hough.validate();
  if (detector == Backend::external && detector_command.empty())
    bad("external detector needs detector_command");
  if (classifier == Backend::external && classifier_command.empty())
    bad("external classifier needs classifier_command");
  if (!(timeout_s > 0)) bad("timeout_s must be positive");
  if (min_samples < 1) bad("min_samples must be >= 1");
  if (noncharacters < 0) bad("noncharacters must be >= 0");
  if (augment_obverse < 0) bad("augment_obverse must be >= 0");
  if (!(crop_pad >= 0)) bad("crop_pad must be >= 0");
  if (crop_size < 1) bad("crop_size must be >= 1");
  if (!(val_fraction >= 0 && val_fraction < 1)) bad("val_fraction must be in [0, 1)");
  if (jobs < 1) bad("jobs must be >= 1");
}

json to_json(const RunConfig& c) {
  return {{"k", c.k},
          {"seed", c.seed},
          {"iou_threshold", c.iou_threshold},
          {"conf_threshold", c.conf_threshold},
          {"hough", to_json(c.hough)},
          {"detector", to_string(c.detector)},
          {"classifier", to_string(c.classifier)},
          {"detector_command", c.detector_command},
          {"classifier_command", c.classifier_command},
          {"timeout_s", c.timeout_s},
          {"baseline", c.baseline.to_json()},
          {"min_samples", c.min_samples},
          {"noncharacters", c.noncharacters},
          {"augment_obverse", c.augment_obverse},
          {"side", c.side ? std::string(to_string(*c.side)) : std::string("all")},
          {"crop_pad", c.crop_pad},
          {"crop_size", c.crop_size},
          {"val_fraction", c.val_fraction},
          {"jobs", c.jobs}};
}

RunConfig run_config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw ValidationError("config: expected an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "k") c.k = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "iou_threshold") c.iou_threshold = v.get<double>();
      else if (key == "conf_threshold") c.conf_threshold = v.get<double>();
      else if (key == "hough") c.hough = hough_params_from_json(v, c.hough);
      else if (key == "detector") c.detector = backend_from_string(v.get<std::string>());
      else if (key == "classifier") c.classifier = backend_from_string(v.get<std::string>());
      else if (key == "detector_command") c.detector_command = v.get<std::string>();
      else if (key == "classifier_command") c.classifier_command = v.get<std::string>();
      else if (key == "timeout_s") c.timeout_s = v.get<double>();
      else if (key == "baseline") c.baseline = BaselineParams::from_json(v);
      else if (key == "min_samples") c.min_samples = v.get<int>();
      else if (key == "noncharacters") c.noncharacters = v.get<int>();
      else if (key == "augment_obverse") c.augment_obverse = v.get<int>();
      else if (key == "side") {
        const auto s = v.get<std::string>();
        c.side = s == "all" ? std::nullopt : std::optional<Side>(side_from_string(s));
      }
      else if (key == "crop_pad") c.crop_pad = v.get<double>();
      else if (key == "crop_size") c.crop_size = v.get<int>();
      else if (key == "val_fraction") c.val_fraction = v.get<double>();
      else if (key == "jobs") c.jobs = v.get<int>();
      else throw ValidationError(fmt::format("config: unknown key '{}'", key));
    }
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("config: {}", e.what()));
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig defaults) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot read config {}", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("config {}: {}", path.string(), e.what()));
  }
  return run_config_from_json(j, std::move(defaults));
}

}  // namespace sealread
