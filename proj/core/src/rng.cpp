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

#include "usbeam/rng.hpp"

namespace usbeam {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

SeedSpec derive_seed(SeedSpec seed, std::uint64_t stream) {
  return SeedSpec{splitmix64(splitmix64(seed.seed) ^ splitmix64(~stream))};
}

Engine make_engine(SeedSpec seed) { return Engine(seed.seed); }

std::uint64_t uniform_index(Engine& engine, std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return engine();  // full 64-bit range
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = Engine::max() - Engine::max() % span;
  std::uint64_t v;
  do {
    v = engine();
  } while (v >= limit);
  return lo + v % span;
}

double uniform_real(Engine& engine, double lo, double hi) {
  // 53 random bits -> [0, 1)
  const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace usbeam
