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

#include "sealread/external.hpp"

#include <openssl/evp.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>

#include <fmt/format.h>

#include "sealread/error.hpp"
#include "sealread/image.hpp"

extern char** environ;

namespace sealread {

using nlohmann::json;

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw BackendError("base64: length is not a multiple of 4");
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw BackendError("base64: invalid input");
  // EVP_DecodeBlock keeps the zero bytes that stand for '=' padding.
  std::size_t size = static_cast<std::size_t>(n);
  if (!text.empty() && text.back() == '=') --size;
  if (text.size() >= 2 && text[text.size() - 2] == '=') --size;
  out.resize(size);
  return out;
}

ModelProcess::ModelProcess(ExternalOptions options) : options_(std::move(options)) {
  static std::once_flag ignore_sigpipe;
  std::call_once(ignore_sigpipe, [] { ::signal(SIGPIPE, SIG_IGN); });
  if (options_.command.empty()) throw ValidationError("external backend: empty command");
  if (options_.timeout_s <= 0) throw ValidationError("external backend: timeout must be positive");
}

ModelProcess::~ModelProcess() { stop(); }

void ModelProcess::start() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) throw BackendError("external backend: pipe() failed");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw BackendError("external backend: pipe() failed");
  }
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&fa, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&fa, in_pipe[1]);
  posix_spawn_file_actions_addclose(&fa, out_pipe[0]);
  std::string cmd = options_.command;
  char sh[] = "/bin/sh";
  char dash_c[] = "-c";
  char* argv[] = {sh, dash_c, cmd.data(), nullptr};
  const int rc = posix_spawn(&pid_, "/bin/sh", &fa, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&fa);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    pid_ = -1;
    throw BackendError(fmt::format("external backend: cannot spawn: {}", std::strerror(rc)));
  }
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();

  try {
    handshake_ = json::parse(read_line());
  } catch (const json::exception& e) {
    stop();
    throw BackendError(fmt::format("external backend: malformed handshake: {}", e.what()));
  } catch (...) {
    stop();
    throw;
  }
  if (!handshake_.is_object() || handshake_.value("protocol", "") != kModelProtocol) {
    const auto got = handshake_.dump();
    stop();
    throw BackendError(fmt::format("external backend: expected protocol {}, handshake was {}",
                                   kModelProtocol, got));
  }
}

void ModelProcess::stop() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(pid_, SIGTERM);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
  pid_ = -1;
}

const json& ModelProcess::handshake() {
  if (pid_ <= 0) start();
  return handshake_;
}

std::string ModelProcess::read_line() {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + std::chrono::duration<double>(options_.timeout_s);
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    if (left <= 0) throw BackendError("external backend: timed out waiting for the model");
    pollfd p{from_child_, POLLIN, 0};
    const int r = ::poll(&p, 1, static_cast<int>(left));
    if (r < 0 && errno == EINTR) continue;
    if (r < 0) throw BackendError("external backend: poll() failed");
    if (r == 0) continue;
    char buf[65536];
    const ssize_t n = ::read(from_child_, buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw BackendError("external backend: model process closed its output");
    buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

void ModelProcess::write_line(const std::string& line) {
  std::string data = line + '\n';
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw BackendError("external backend: cannot write to model process");
    off += static_cast<std::size_t>(n);
  }
}

json ModelProcess::request(json message) {
  if (pid_ <= 0) start();
  const std::string id = std::to_string(next_id_++);
  message["id"] = id;
  try {
    write_line(message.dump());
    json response;
    try {
      response = json::parse(read_line());
    } catch (const json::exception& e) {
      throw BackendError(fmt::format("external backend: malformed response: {}", e.what()));
    }
    if (!response.is_object() || !response.contains("id") || response["id"] != id)
      throw BackendError(fmt::format("external backend: response id mismatch (sent {})", id));
    if (response.contains("error"))
      throw BackendError(fmt::format("external backend: model error: {}", response["error"].dump()));
    return response;
  } catch (const BackendError&) {
    stop();
    throw;
  }
}

json detections_to_json(const std::vector<Detection>& dets) {
  json arr = json::array();
  for (const auto& d : dets)
    arr.push_back({{"cx", d.bbox.cx}, {"cy", d.bbox.cy}, {"w", d.bbox.w}, {"h", d.bbox.h},
                   {"conf", d.confidence}});
  return arr;
}

std::vector<Detection> detections_from_json(const json& j) {
  if (!j.is_array()) throw BackendError("external backend: detections must be an array");
  std::vector<Detection> out;
  try {
    for (const auto& d : j)
      out.push_back({{d.at("cx").get<double>(), d.at("cy").get<double>(), d.at("w").get<double>(),
                      d.at("h").get<double>()},
                     d.at("conf").get<double>()});
  } catch (const json::exception& e) {
    throw BackendError(fmt::format("external backend: bad detection: {}", e.what()));
  }
  return out;
}

ExternalDetector::ExternalDetector(ExternalOptions options) : proc_(std::move(options)) {}

std::vector<Detection> ExternalDetector::detect(const Image& image, const InferenceContext&) {
  auto r = proc_.request({{"op", "detect"}, {"image", base64_encode(encode_png(image))}});
  if (!r.contains("detections")) throw BackendError("external backend: response lacks detections");
  return detections_from_json(r["detections"]);
}

ExternalClassifier::ExternalClassifier(ExternalOptions options, std::vector<std::string> classes)
    : proc_(std::move(options)), classes_(std::move(classes)) {}

void ExternalClassifier::check_handshake() {
  const auto& hs = proc_.handshake();
  std::vector<std::string> declared;
  try {
    declared = hs.at("classes").get<std::vector<std::string>>();
  } catch (const json::exception&) {
    throw BackendError("external classifier: handshake lacks a class list");
  }
  if (declared != classes_)
    throw BackendError(fmt::format("external classifier: declared classes [{}] differ from the "
                                   "active subset [{}]",
                                   fmt::join(declared, ","), fmt::join(classes_, ",")));
}

ClassScores ExternalClassifier::classify(const Image& crop, const BBox&, const InferenceContext&) {
  check_handshake();
  auto r = proc_.request({{"op", "classify"}, {"image", base64_encode(encode_png(crop))}});
  const auto it = r.find("scores");
  if (it == r.end() || !it->is_object())
    throw BackendError("external backend: response lacks a scores object");
  if (it->size() != classes_.size())
    throw BackendError("external backend: scores do not cover the active subset exactly");
  ClassScores s;
  try {
    for (const auto& name : classes_) s.scores.push_back(it->at(name).get<double>());
  } catch (const json::exception& e) {
    throw BackendError(fmt::format("external backend: bad scores: {}", e.what()));
  }
  s.validate(classes_.size());
  return s;
}

}  // namespace sealread
