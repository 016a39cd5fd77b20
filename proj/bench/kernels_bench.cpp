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

// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include "sealread/image.hpp"
#include "sealread/kernels.hpp"
#include "sealread/rng.hpp"

using namespace sealread;

namespace {

Image noise(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  Image img(w, h);
  for (auto& v : img.pixels()) v = static_cast<float>(uniform(rng, 0, 255));
  return img;
}

const Image& seal_sized() {
  static const Image img = noise(320, 320, 1);
  return img;
}

const kernels::Template& glyph_template() {
  static const auto t = kernels::Template::from_patch(noise(14, 18, 2));
  return t;
}

void BM_ncc_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::ncc_serial(seal_sized(), glyph_template()));
}
void BM_ncc_parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::ncc_parallel(seal_sized(), glyph_template()));
}
void BM_normalize_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::normalize_local_serial(seal_sized(), 8, 4.0f));
}
void BM_normalize_parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::normalize_local_parallel(seal_sized(), 8, 4.0f));
}
void BM_shade_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::shade_serial(seal_sized(), {}));
}
void BM_shade_parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::shade_parallel(seal_sized(), {}));
}

}  // namespace

BENCHMARK(BM_ncc_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ncc_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_normalize_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_normalize_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shade_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shade_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
