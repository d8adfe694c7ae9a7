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

#include "usbeam/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include "usbeam/rng.hpp"

namespace usbeam {
namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument(std::string("PipelineConfig: ") + name + " must lie in [0, 1]");
  }
}

/// "Same"-size 2-D correlation with zero padding; kernel centred at (rows/2, cols/2).
void correlate_same(const std::vector<double>& in, std::size_t rows, std::size_t cols,
                    const Grid<double>& k, std::vector<double>& out) {
  const auto kr = static_cast<std::ptrdiff_t>(k.rows());
  const auto kc = static_cast<std::ptrdiff_t>(k.cols());
  const std::ptrdiff_t ar = kr / 2;
  const std::ptrdiff_t ac = kc / 2;
  const auto R = static_cast<std::ptrdiff_t>(rows);
  const auto C = static_cast<std::ptrdiff_t>(cols);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::ptrdiff_t i = 0; i < kr; ++i) {
    for (std::ptrdiff_t j = 0; j < kc; ++j) {
      const double w = k(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (w == 0.0) continue;
      const std::ptrdiff_t di = i - ar;
      const std::ptrdiff_t dj = j - ac;
      const std::ptrdiff_t r0 = std::max<std::ptrdiff_t>(0, -di);
      const std::ptrdiff_t r1 = std::min(R, R - di);
      const std::ptrdiff_t c0 = std::max<std::ptrdiff_t>(0, -dj);
      const std::ptrdiff_t c1 = std::min(C, C - dj);
      for (std::ptrdiff_t r = r0; r < r1; ++r) {
        const double* src = &in[static_cast<std::size_t>((r + di) * C + dj)];
        double* dst = &out[static_cast<std::size_t>(r * C)];
        for (std::ptrdiff_t c = c0; c < c1; ++c) dst[c] += w * src[c];
      }
    }
  }
}

}  // namespace

Grid<double> default_speckle_kernel() {
  constexpr double kRows[5] = {0.9, 0.8, 0.6, 0.4, 0.2};
  Grid<double> k(5, 3);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 3; ++c) k(r, c) = kRows[r] / 2.9;
  }
  k(2, 1) = 0.0;
  return k;
}

void SpeckleParams::validate(std::size_t num_elements) const {
  if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) {
    throw InvalidArgument("SpeckleParams: noise_level must be >= 0");
  }
  if (num_noisy_channels < 1 || num_noisy_channels > num_elements) {
    throw InvalidArgument("SpeckleParams: num_noisy_channels must lie in [1, num_elements]");
  }
  if (kernel.size() == 0) throw InvalidArgument("SpeckleParams: empty kernel");
  for (double v : kernel.values()) {
    if (!std::isfinite(v)) throw InvalidArgument("SpeckleParams: non-finite kernel entry");
  }
}

std::vector<std::size_t> speckle_channels(std::size_t num_elements, std::size_t num_noisy) {
  if (num_noisy < 1 || num_noisy > num_elements) {
    throw InvalidArgument("speckle_channels: need 1 <= num_noisy <= num_elements");
  }
  const std::size_t stride = num_elements / num_noisy;
  std::vector<std::size_t> out(num_noisy);
  for (std::size_t j = 0; j < num_noisy; ++j) out[j] = j * stride;
  return out;
}

ChannelData speckle_noise(const ChannelData& cd, const SpeckleParams& params, SeedSpec seed) {
  params.validate(cd.num_elements());
  ChannelData out = cd;
  if (params.noise_level == 0.0) return out;

  const std::size_t T = cd.num_samples();
  const std::size_t L = cd.num_lines();
  const std::size_t n = T * L;
  std::vector<double> gx(n), gy(n), u(n), v(n);
  const double sigma = std::sqrt(params.noise_level);

  for (std::size_t e : speckle_channels(cd.num_elements(), params.num_noisy_channels)) {
    Engine engine = make_engine(derive_seed(seed, e));
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& g : gx) g = normal(engine);
    for (double& g : gy) g = normal(engine);
    correlate_same(gx, T, L, params.kernel, u);
    correlate_same(gy, T, L, params.kernel, v);

    auto slice = out.element_slice(e);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = slice[i];
      const double mag = params.abs_mode ? std::abs(x) : std::sqrt(std::abs(x));
      const double sgn = static_cast<double>((x > 0.0) - (x < 0.0));
      slice[i] = static_cast<float>(x + 2.0 * sgn * mag * u[i] + u[i] * u[i] + v[i] * v[i]);
    }
  }
  return out;
}

void GaussianNoiseParams::validate() const {
  if (!(additive_variance >= 0.0) || !(multiplicative_variance >= 0.0) ||
      !std::isfinite(additive_variance) || !std::isfinite(multiplicative_variance) ||
      !std::isfinite(multiplicative_mean)) {
    throw InvalidArgument("GaussianNoiseParams: variances must be finite and >= 0");
  }
}

ChannelData gaussian_noise(const ChannelData& cd, SeedSpec seed, const GaussianNoiseParams& params,
                           GaussianNoiseKind* chosen) {
  Engine coin = make_engine(derive_seed(seed, 0));
  const GaussianNoiseKind kind =
      uniform_index(coin, 0, 1) == 0 ? GaussianNoiseKind::kAdditive : GaussianNoiseKind::kMultiplicative;
  if (chosen != nullptr) *chosen = kind;
  return gaussian_noise(cd, kind, derive_seed(seed, 1), params);
}

ChannelData gaussian_noise(const ChannelData& cd, GaussianNoiseKind kind, SeedSpec seed,
                           const GaussianNoiseParams& params) {
  params.validate();
  ChannelData out = cd;
  const bool additive = kind == GaussianNoiseKind::kAdditive;
  const double mean = additive ? 0.0 : params.multiplicative_mean;
  const double sd = std::sqrt(additive ? params.additive_variance : params.multiplicative_variance);
  for (std::size_t e = 0; e < cd.num_elements(); ++e) {
    Engine engine = make_engine(derive_seed(seed, e));
    std::normal_distribution<double> normal(mean, sd);
    for (float& x : out.element_slice(e)) {
      const double z = normal(engine);
      x = static_cast<float>(additive ? x + z : x * z);
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> SubsampleParams::keep_count_range(std::size_t num_elements) const {
  const double e = static_cast<double>(num_elements);
  const auto lo = static_cast<std::size_t>(std::max(1.0, std::ceil(keep_fraction_min * e)));
  const auto hi = static_cast<std::size_t>(std::floor(keep_fraction_max * e));
  return {lo, hi};
}

void SubsampleParams::validate(std::size_t num_elements) const {
  if (time_factor < 1 || line_factor < 1) throw InvalidArgument("SubsampleParams: factors must be >= 1");
  if (!(keep_fraction_min > 0.0 && keep_fraction_min <= keep_fraction_max && keep_fraction_max <= 1.0)) {
    throw InvalidArgument("SubsampleParams: keep fraction range must satisfy 0 < min <= max <= 1");
  }
  const auto [lo, hi] = keep_count_range(num_elements);
  if (lo > hi) throw InvalidArgument("SubsampleParams: keep fraction range selects no element count");
}

ChannelData subsample_mask(const ChannelData& cd, const SubsampleParams& params, SeedSpec seed,
                           std::vector<std::size_t>* kept) {
  const std::size_t E = cd.num_elements();
  const std::size_t T = cd.num_samples();
  const std::size_t L = cd.num_lines();
  params.validate(E);

  Engine engine = make_engine(seed);
  const auto [lo, hi] = params.keep_count_range(E);
  const std::size_t k = uniform_index(engine, lo, hi);
  std::vector<std::size_t> order(E);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[uniform_index(engine, i, E - 1)]);
  std::vector<bool> keep(E, false);
  for (std::size_t i = 0; i < k; ++i) keep[order[i]] = true;
  if (kept != nullptr) {
    kept->assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(kept->begin(), kept->end());
  }

  ChannelData out = cd;
  for (std::size_t e = 0; e < E; ++e) {
    auto slice = out.element_slice(e);
    if (!keep[e]) {
      std::fill(slice.begin(), slice.end(), 0.0f);
      continue;
    }
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t l = 0; l < L; ++l) {
        if (t % params.time_factor != 0 || l % params.line_factor != 0) slice[t * L + l] = 0.0f;
      }
    }
  }
  return out;
}

void DropoutParams::validate(std::size_t num_samples, std::size_t num_lines) const {
  if (patch_time < 1 || patch_lines < 1) throw InvalidArgument("DropoutParams: patch size must be >= 1");
  if (patch_time > num_samples || patch_lines > num_lines) {
    throw InvalidArgument("DropoutParams: patch does not fit in (T, L)");
  }
  if (fixed_origin && (fixed_origin->first + patch_time > num_samples ||
                       fixed_origin->second + patch_lines > num_lines)) {
    throw InvalidArgument("DropoutParams: fixed origin places the patch out of range");
  }
}

ChannelData coarse_dropout(const ChannelData& cd, const DropoutParams& params, SeedSpec seed) {
  const std::size_t T = cd.num_samples();
  const std::size_t L = cd.num_lines();
  params.validate(T, L);

  Engine engine = make_engine(seed);
  std::vector<std::uint8_t> zero(T * L, 0);
  for (std::size_t p = 0; p < params.num_patches; ++p) {
    std::size_t t0 = 0;
    std::size_t l0 = 0;
    if (params.fixed_origin) {
      std::tie(t0, l0) = *params.fixed_origin;
    } else {
      t0 = uniform_index(engine, 0, T - params.patch_time);
      l0 = uniform_index(engine, 0, L - params.patch_lines);
    }
    for (std::size_t t = t0; t < t0 + params.patch_time; ++t) {
      std::fill_n(zero.begin() + static_cast<std::ptrdiff_t>(t * L + l0), params.patch_lines, 1);
    }
  }

  ChannelData out = cd;
  for (std::size_t e = 0; e < cd.num_elements(); ++e) {
    auto slice = out.element_slice(e);
    for (std::size_t i = 0; i < zero.size(); ++i) {
      if (zero[i]) slice[i] = 0.0f;
    }
  }
  return out;
}

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kSpeckle: return "speckle";
    case Stage::kGaussian: return "gaussian";
    case Stage::kSpecAugment: return "spec_augment";
    case Stage::kSubsample: return "subsample";
    case Stage::kDropout: return "dropout";
  }
  return "unknown";
}

void PipelineConfig::validate() const {
  check_probability(speckle_prob, "speckle_prob");
  check_probability(gaussian_prob, "gaussian_prob");
  check_probability(specaugment_prob, "specaugment_prob");
  check_probability(subsample_prob, "subsample_prob");
  check_probability(dropout_prob, "dropout_prob");
  gaussian.validate();
  spec_augment.validate();
}

ChannelData augment_pipeline(const ChannelData& cd, const PipelineConfig& cfg, std::vector<Stage>* fired) {
  cfg.validate();
  // All five coins are drawn up front so each decision is independent of the others.
  Engine coins = make_engine(derive_seed(cfg.seed, 0));
  const std::pair<Stage, double> stages[] = {
      {Stage::kSpeckle, cfg.speckle_prob},     {Stage::kGaussian, cfg.gaussian_prob},
      {Stage::kSpecAugment, cfg.specaugment_prob}, {Stage::kSubsample, cfg.subsample_prob},
      {Stage::kDropout, cfg.dropout_prob},
  };
  bool run[5];
  for (std::size_t i = 0; i < 5; ++i) run[i] = uniform_real(coins, 0.0, 1.0) < stages[i].second;

  ChannelData out = cd;
  for (std::size_t i = 0; i < 5; ++i) {
    if (!run[i]) continue;
    const SeedSpec sub = derive_seed(cfg.seed, i + 1);
    switch (stages[i].first) {
      case Stage::kSpeckle: out = speckle_noise(out, cfg.speckle, sub); break;
      case Stage::kGaussian: out = gaussian_noise(out, sub, cfg.gaussian); break;
      case Stage::kSpecAugment: out = spec_augment(out, cfg.spec_augment, sub); break;
      case Stage::kSubsample: out = subsample_mask(out, cfg.subsample, sub); break;
      case Stage::kDropout: out = coarse_dropout(out, cfg.dropout, sub); break;
    }
    if (fired != nullptr) fired->push_back(stages[i].first);
  }
  return out;
}

}  // namespace usbeam
