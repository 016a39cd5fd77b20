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
#include <span>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

#include "json.hpp"
#include "sealread/infer.hpp"

// Newline-delimited JSON over a child process's stdin/stdout.
//
//   child -> {"protocol":"sealread-model/1","kind":"detector"|"classifier",
//             "classes":[...]}                       (handshake, classifier only lists classes)
//   parent -> {"op":"detect"|"classify","id":"<n>","image":"<base64 PNG>"}
//   child -> {"id":"<n>","detections":[{"cx":..,"cy":..,"w":..,"h":..,"conf":..},...]}
//         or {"id":"<n>","scores":{"<class name>":p,...}}
//         or {"id":"<n>","error":"..."}
//
// Any timeout, malformed line, id mismatch or child exit raises BackendError;
// the child is then restarted on the next request.

namespace sealread {

inline constexpr std::string_view kModelProtocol = "sealread-model/1";

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

struct ExternalOptions {
  std::string command;  // run through /bin/sh -c
  double timeout_s = 30.0;
};

class ModelProcess {
 public:
  explicit ModelProcess(ExternalOptions options);
  ~ModelProcess();
  ModelProcess(const ModelProcess&) = delete;
  ModelProcess& operator=(const ModelProcess&) = delete;

  /// Starts the child if needed and returns its handshake message.
  const nlohmann::json& handshake();
  /// Sends one request line and returns the parsed response with matching id.
  nlohmann::json request(nlohmann::json message);

 private:
  void start();
  void stop();
  std::string read_line();
  void write_line(const std::string& line);

  ExternalOptions options_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  nlohmann::json handshake_;
  std::uint64_t next_id_ = 1;
};

nlohmann::json detections_to_json(const std::vector<Detection>& dets);
std::vector<Detection> detections_from_json(const nlohmann::json& j);

class ExternalDetector final : public Detector {
 public:
  explicit ExternalDetector(ExternalOptions options);
  std::vector<Detection> detect(const Image& image, const InferenceContext&) override;

 private:
  ModelProcess proc_;
};

class ExternalClassifier final : public Classifier {
 public:
  /// `classes` is the active subset; the child's handshake must list exactly
  /// these names in this order.
  ExternalClassifier(ExternalOptions options, std::vector<std::string> classes);
  const std::vector<std::string>& classes() const override { return classes_; }
  ClassScores classify(const Image& crop, const BBox& box, const InferenceContext&) override;

 private:
  void check_handshake();
  ModelProcess proc_;
  std::vector<std::string> classes_;
};

}  // namespace sealread
