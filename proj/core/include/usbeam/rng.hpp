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

#ifndef USBEAM_RNG_HPP
#define USBEAM_RNG_HPP

#include <cstdint>
#include <random>

#include "usbeam/types.hpp"

namespace usbeam {

using Engine = std::mt19937_64;

/// Independent sub-seed for stream `stream` of `seed` (SplitMix64 mixing).
/// Stochastic operations give every stage, slice or draw group its own stream
/// so results never depend on evaluation order.
SeedSpec derive_seed(SeedSpec seed, std::uint64_t stream);

Engine make_engine(SeedSpec seed);

/// Uniform integer in [lo, hi], inclusive. Unlike
/// std::uniform_int_distribution the mapping is fixed by this library.
std::uint64_t uniform_index(Engine& engine, std::uint64_t lo, std::uint64_t hi);

/// Uniform real in [lo, hi).
double uniform_real(Engine& engine, double lo, double hi);

}  // namespace usbeam

#endif  // USBEAM_RNG_HPP
