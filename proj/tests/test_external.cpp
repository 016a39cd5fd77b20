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

#include <chrono>
#include <filesystem>

#include "doctest.h"
#include "sealread/error.hpp"
#include "sealread/external.hpp"

#ifndef SEALREAD_MOCK_MODEL
#error "SEALREAD_MOCK_MODEL must point at the mock model binary"
#endif

using namespace sealread;

namespace {

ExternalOptions mock(const std::string& args, double timeout = 10.0) {
  return {std::string(SEALREAD_MOCK_MODEL) + " " + args, timeout};
}

const std::vector<std::string> kClasses{"ALPHA", "BETA", "NON_CHARACTER"};

}  // namespace

TEST_CASE("base64 round trip") {
  for (std::size_t n = 0; n < 40; ++n) {
    std::vector<std::uint8_t> bytes(n);
    for (std::size_t i = 0; i < n; ++i) bytes[i] = static_cast<std::uint8_t>(i * 37 + 11);
    CHECK(base64_decode(base64_encode(bytes)) == bytes);
  }
  CHECK(base64_encode(std::vector<std::uint8_t>{'M', 'a'}) == "TWE=");
  CHECK_THROWS_AS(base64_decode("abc"), BackendError);
}

TEST_CASE("external detector") {
  ExternalDetector det(mock("--kind detect"));
  const auto d = det.detect(Image(123, 40, 1.0f), {});
  REQUIRE(d.size() == 1);
  CHECK(d[0].bbox.w == doctest::Approx(0.123));
  CHECK(d[0].confidence == 0.9);
  // second request reuses the same process
  CHECK(det.detect(Image(50, 50), {}).size() == 1);
}

TEST_CASE("external classifier") {
  ExternalClassifier cls(mock("--kind classify --classes ALPHA,BETA,NON_CHARACTER"), kClasses);
  const auto s = cls.classify(Image(64, 64), {}, {});
  CHECK(s.scores == std::vector<double>{1, 0, 0});
}

TEST_CASE("class list mismatch is reported") {
  ExternalClassifier cls(mock("--kind classify --classes ALPHA,NON_CHARACTER"), kClasses);
  try {
    cls.classify(Image(8, 8), {}, {});
    FAIL("expected BackendError");
  } catch (const BackendError& e) {
    CHECK(std::string(e.what()).find("ALPHA,NON_CHARACTER") != std::string::npos);
  }
}

TEST_CASE("protocol failures become backend errors") {
  CHECK_THROWS_AS(ExternalDetector(mock("--mode bad-version")).detect(Image(4, 4), {}), BackendError);
  CHECK_THROWS_AS(ExternalDetector(mock("--mode malformed")).detect(Image(4, 4), {}), BackendError);
  CHECK_THROWS_AS(ExternalDetector(mock("--mode error")).detect(Image(4, 4), {}), BackendError);
  CHECK_THROWS_AS(ExternalDetector(mock("--mode wrong-id")).detect(Image(4, 4), {}), BackendError);
  CHECK_THROWS_AS(
      ExternalClassifier(mock("--kind classify --mode partial --classes ALPHA,BETA,NON_CHARACTER"), kClasses)
          .classify(Image(4, 4), {}, {}),
      BackendError);
  CHECK_THROWS_AS(ExternalDetector({"exit 3", 5}).detect(Image(4, 4), {}), BackendError);
  CHECK_THROWS_AS(ExternalDetector({"", 5}), ValidationError);
}

TEST_CASE("timeout kills the child and the next request respawns") {
  const auto marker = std::filesystem::temp_directory_path() / "sealread_mock_sleep_marker";
  std::filesystem::remove(marker);
  ExternalDetector det(mock("--mode sleep-once --marker " + marker.string(), 0.5));
  const auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(det.detect(Image(10, 10), {}), BackendError);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(4));
  CHECK(det.detect(Image(10, 10), {}).size() == 1);
  std::filesystem::remove(marker);
}
