/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The usbeam Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>

#include <benchmark/benchmark.h>

#include "usbeam/augment.hpp"
#include "usbeam/beamform.hpp"
#include "usbeam/spec_augment.hpp"
#include "usbeam/ssim.hpp"

namespace {

using namespace usbeam;

ChannelData noise(const ProbeConfig& probe, Alignment alignment) {
  ChannelData cd(probe, alignment);
  std::mt19937_64 rng(1);
  std::normal_distribution<float> n(0.0f, 1.0f);
  for (float& v : cd.samples()) v = n(rng);
  return cd;
}

Image image(std::uint64_t seed) {
  Image img(kBModeSize, kBModeSize);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (float& v : img.values()) v = u(rng);
  return img;
}

void BM_TofCorrect(benchmark::State& state) {
  const ChannelData raw = noise(ProbeConfig::reduced(), Alignment::kRaw);
  for (auto _ : state) benchmark::DoNotOptimize(tof_correct(raw));
}
BENCHMARK(BM_TofCorrect)->Unit(benchmark::kMillisecond);

void BM_Das(benchmark::State& state) {
  const ChannelData cd = noise(ProbeConfig{}, Alignment::kTofCorrected);
  for (auto _ : state) benchmark::DoNotOptimize(das(cd));
}
BENCHMARK(BM_Das)->Unit(benchmark::kMillisecond);

void BM_Mv(benchmark::State& state) {
  const ChannelData cd = noise(ProbeConfig::reduced(), Alignment::kTofCorrected);
  for (auto _ : state) benchmark::DoNotOptimize(mv(cd));
}
BENCHMARK(BM_Mv)->Unit(benchmark::kMillisecond);

void BM_Speckle(benchmark::State& state) {
  const ChannelData cd = noise(ProbeConfig{}, Alignment::kRaw);
  for (auto _ : state) benchmark::DoNotOptimize(speckle_noise(cd, SpeckleParams{}, SeedSpec{1}));
}
BENCHMARK(BM_Speckle)->Unit(benchmark::kMillisecond);

void BM_SpecAugment(benchmark::State& state) {
  const ChannelData cd = noise(ProbeConfig::reduced(), Alignment::kRaw);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(spec_augment(cd, SpecAugmentParams{}, SeedSpec{++seed}));
}
BENCHMARK(BM_SpecAugment)->Unit(benchmark::kMillisecond);

void BM_MsSsim(benchmark::State& state) {
  const Image a = image(1), b = image(2);
  for (auto _ : state) benchmark::DoNotOptimize(ms_ssim(a, b));
}
BENCHMARK(BM_MsSsim)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
