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

#include "usbeam/beamform.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"

namespace usbeam {
namespace {

void require_corrected(const ChannelData& cd, const char* who) {
  if (cd.alignment() != Alignment::kTofCorrected) {
    throw InvalidArgument(std::string(who) + ": input must be ToF-corrected");
  }
}

void require_finite(const PreImage& pre) {
  for (double v : pre.values()) {
    if (!std::isfinite(v)) throw InvalidArgument("pre-image contains non-finite values");
  }
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Solves R v = 1 and returns v / sum(v). R must be symmetric positive definite.
void solve_capon(const RowMatrix& r, Eigen::VectorXd& w) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(r.rows());
  Eigen::LLT<RowMatrix> llt(r);
  if (llt.info() == Eigen::Success) {
    w = llt.solve(ones);
  } else {
    w = r.ldlt().solve(ones);
  }
  w /= w.sum();
}

}  // namespace

ChannelData tof_correct(const ChannelData& raw) {
  if (raw.alignment() != Alignment::kRaw) {
    throw InvalidArgument("tof_correct: input is already ToF-corrected");
  }
  const ProbeConfig& p = raw.probe();
  const std::size_t E = p.num_elements;
  const std::size_t T = p.num_samples;
  const std::size_t L = p.num_lines;
  const double fs = p.sample_rate;
  const double c = p.sound_speed;
  const double last = static_cast<double>(T - 1);

  ChannelData out(p, Alignment::kTofCorrected);
  for (std::size_t e = 0; e < E; ++e) {
    const double xe = p.element_x(e);
    for (std::size_t l = 0; l < L; ++l) {
      const double dx = xe - p.line_x(static_cast<double>(l));
      const double dx2 = dx * dx;
      for (std::size_t t = 0; t < T; ++t) {
        const double z = p.sample_depth(static_cast<double>(t));
        const double src = fs * (z + std::sqrt(z * z + dx2)) / c;
        if (src > last) break;  // src is increasing in t
        const auto i = static_cast<std::size_t>(src);
        const double frac = src - static_cast<double>(i);
        const double a = raw(e, i, l);
        const double b = i + 1 < T ? raw(e, i + 1, l) : 0.0;
        out(e, t, l) = static_cast<float>(a + frac * (b - a));
      }
    }
  }
  return out;
}

PreImage das(const ChannelData& cd) {
  require_corrected(cd, "das");
  const std::size_t E = cd.num_elements();
  const std::size_t T = cd.num_samples();
  const std::size_t L = cd.num_lines();
  PreImage out(T, L);
  auto dst = out.values();
  for (std::size_t e = 0; e < E; ++e) {
    const auto src = cd.element_slice(e);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
  }
  const double inv = 1.0 / static_cast<double>(E);
  for (double& v : dst) v *= inv;
  return out;
}

std::size_t MvParams::resolved_subaperture(std::size_t num_elements) const {
  return subaperture_len.value_or(num_elements / 2);
}

void MvParams::validate(std::size_t num_elements) const {
  const std::size_t lsub = resolved_subaperture(num_elements);
  if (lsub < 1 || lsub > num_elements) {
    throw InvalidArgument("MvParams: subaperture_len must lie in [1, num_elements]");
  }
  if (!(diagonal_loading > 0.0) || !std::isfinite(diagonal_loading)) {
    throw InvalidArgument("MvParams: diagonal_loading must be > 0");
  }
  if (temporal_averaging < 1) throw InvalidArgument("MvParams: temporal_averaging must be >= 1");
}

std::vector<double> capon_weights(std::span<const double> covariance, std::size_t n) {
  if (n == 0 || covariance.size() != n * n) {
    throw InvalidArgument("capon_weights: covariance must be n x n with n > 0");
  }
  const RowMatrix r = Eigen::Map<const RowMatrix>(covariance.data(), static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(n));
  Eigen::VectorXd w;
  solve_capon(r, w);
  return {w.data(), w.data() + n};
}

PreImage mv(const ChannelData& cd, const MvParams& params, MvDiagnostics* diagnostics) {
  require_corrected(cd, "mv");
  const std::size_t E = cd.num_elements();
  const std::size_t T = cd.num_samples();
  const std::size_t L = cd.num_lines();
  params.validate(E);
  const std::size_t lsub = params.resolved_subaperture(E);
  const std::size_t num_snapshots = E - lsub + 1;
  const std::size_t half_before = (params.temporal_averaging - 1) / 2;
  const std::size_t half_after = params.temporal_averaging / 2;

  PreImage out(T, L);
  MvDiagnostics diag;
  std::vector<double> x(T * E);       // one scan line, [t][e]
  std::vector<double> prefix(E + 1);
  RowMatrix r(lsub, lsub);
  Eigen::VectorXd w(lsub);
  Eigen::VectorXd ybar(lsub);

  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t e = 0; e < E; ++e) {
      for (std::size_t t = 0; t < T; ++t) x[t * E + e] = cd(e, t, l);
    }
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t t0 = t >= half_before ? t - half_before : 0;
      const std::size_t t1 = std::min(T - 1, t + half_after);

      // Upper triangle of sum_k y_k y_k^T via prefix sums of lagged products.
      r.setZero();
      for (std::size_t tt = t0; tt <= t1; ++tt) {
        const double* xs = &x[tt * E];
        for (std::size_t d = 0; d < lsub; ++d) {
          prefix[0] = 0.0;
          for (std::size_t m = 0; m + d < E; ++m) prefix[m + 1] = prefix[m] + xs[m] * xs[m + d];
          for (std::size_t i = 0; i + d < lsub; ++i) {
            r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + d)) +=
                prefix[i + num_snapshots] - prefix[i];
          }
        }
      }
      const double norm = 1.0 / static_cast<double>(num_snapshots * (t1 - t0 + 1));
      r.triangularView<Eigen::Upper>() *= norm;
      r.triangularView<Eigen::StrictlyLower>() = r.transpose().triangularView<Eigen::StrictlyLower>();

      const double trace = r.trace();
      if (!(trace > 0.0)) {
        ++diag.zero_pixels;
        continue;
      }
      const double eps = params.diagonal_loading * trace / static_cast<double>(lsub);
      r.diagonal().array() += eps;
      solve_capon(r, w);
      diag.max_constraint_error = std::max(diag.max_constraint_error, std::abs(w.sum() - 1.0));

      // Mean over snapshots of w^T y_k equals w^T (mean_k y_k).
      const double* xs = &x[t * E];
      prefix[0] = 0.0;
      for (std::size_t m = 0; m < E; ++m) prefix[m + 1] = prefix[m] + xs[m];
      for (std::size_t i = 0; i < lsub; ++i) {
        ybar(static_cast<Eigen::Index>(i)) =
            (prefix[i + num_snapshots] - prefix[i]) / static_cast<double>(num_snapshots);
      }
      out(t, l) = w.dot(ybar);
    }
  }
  if (diagnostics != nullptr) *diagnostics = diag;
  return out;
}

Apodization parse_apodization(std::string_view name) {
  if (name == "das") return Apodization::kDas;
  if (name == "mv") return Apodization::kMv;
  throw InvalidArgument("unknown beamforming method '" + std::string(name) + "' (expected das or mv)");
}

std::string_view apodization_name(Apodization a) { return a == Apodization::kDas ? "das" : "mv"; }

PreImage envelope(const PreImage& pre) {
  require_finite(pre);
  const std::size_t T = pre.rows();
  const std::size_t L = pre.cols();
  PreImage env(T, L);
  if (T == 0 || L == 0) return env;

  // Normalising first makes the result independent of the input scale.
  double peak = 0.0;
  for (double v : pre.values()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return env;

  detail::AnalyticEnvelope analytic(T);
  std::vector<double> column(T);
  std::vector<double> mag(T);
  double env_peak = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t t = 0; t < T; ++t) column[t] = pre(t, l) / peak;
    analytic.compute(column, mag);
    for (std::size_t t = 0; t < T; ++t) {
      env(t, l) = mag[t];
      env_peak = std::max(env_peak, mag[t]);
    }
  }
  if (env_peak > 0.0) {
    for (double& v : env.values()) v /= env_peak;
  }
  return env;
}

BModeImage form_image(const PreImage& pre, double dynamic_range_db) {
  if (!(dynamic_range_db > 0.0) || !std::isfinite(dynamic_range_db)) {
    throw InvalidArgument("form_image: dynamic range must be > 0 dB");
  }
  if (pre.rows() < 2 || pre.cols() < 2) throw InvalidArgument("form_image: pre-image must be at least 2 x 2");
  const PreImage env = envelope(pre);
  const std::size_t T = env.rows();
  const std::size_t L = env.cols();

  const double peak = *std::max_element(env.values().begin(), env.values().end());
  PreImage compressed(T, L);
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (!(peak > 0.0)) break;  // all-zero envelope gives an all-zero image
    const double v = env.values()[i] / peak;
    if (v <= 0.0) continue;  // -inf dB clamps to 0
    const double db = std::clamp(20.0 * std::log10(v), -dynamic_range_db, 0.0);
    compressed.values()[i] = (db + dynamic_range_db) / dynamic_range_db;
  }

  Image px(kBModeSize, kBModeSize);
  const double row_scale = static_cast<double>(T - 1) / static_cast<double>(kBModeSize - 1);
  const double col_scale = static_cast<double>(L - 1) / static_cast<double>(kBModeSize - 1);
  for (std::size_t r = 0; r < kBModeSize; ++r) {
    const double fr = static_cast<double>(r) * row_scale;
    const std::size_t r0 = std::min(static_cast<std::size_t>(fr), T - 2);
    const double ar = fr - static_cast<double>(r0);
    for (std::size_t c = 0; c < kBModeSize; ++c) {
      const double fc = static_cast<double>(c) * col_scale;
      const std::size_t c0 = std::min(static_cast<std::size_t>(fc), L - 2);
      const double ac = fc - static_cast<double>(c0);
      const double top = compressed(r0, c0) + ac * (compressed(r0, c0 + 1) - compressed(r0, c0));
      const double bottom =
          compressed(r0 + 1, c0) + ac * (compressed(r0 + 1, c0 + 1) - compressed(r0 + 1, c0));
      px(r, c) = static_cast<float>(std::clamp(top + ar * (bottom - top), 0.0, 1.0));
    }
  }
  return BModeImage(std::move(px), dynamic_range_db);
}

namespace {

/// Width between the -6 dB crossings either side of `peak` in a 1-D profile,
/// with `threshold` the crossing level.
template <typename Get>
double crossing_width(std::size_t n, std::size_t peak, double threshold, Get get) {
  double left = 0.0;
  for (std::size_t i = peak; i > 0; --i) {
    if (get(i - 1) < threshold) {
      const double a = get(i - 1);
      const double b = get(i);
      left = static_cast<double>(i - 1) + (threshold - a) / (b - a);
      break;
    }
  }
  double right = static_cast<double>(n - 1);
  for (std::size_t i = peak; i + 1 < n; ++i) {
    if (get(i + 1) < threshold) {
      const double a = get(i);
      const double b = get(i + 1);
      right = static_cast<double>(i) + (a - threshold) / (a - b);
      break;
    }
  }
  return right - left;
}

}  // namespace

double lateral_width_6db(const PreImage& env, std::size_t row) {
  if (row >= env.rows() || env.cols() == 0) throw InvalidArgument("lateral_width_6db: row out of range");
  std::size_t peak = 0;
  for (std::size_t c = 1; c < env.cols(); ++c) {
    if (env(row, c) > env(row, peak)) peak = c;
  }
  const double threshold = env(row, peak) * std::pow(10.0, -6.0 / 20.0);
  return crossing_width(env.cols(), peak, threshold, [&](std::size_t c) { return env(row, c); });
}

double image_lateral_width_6db(const Image& img, double dynamic_range_db) {
  if (img.size() == 0) throw InvalidArgument("image_lateral_width_6db: empty image");
  std::size_t best = 0;
  const auto v = img.values();
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  const std::size_t row = best / img.cols();
  const std::size_t col = best % img.cols();
  const double threshold = static_cast<double>(v[best]) - 6.0 / dynamic_range_db;
  return crossing_width(img.cols(), col, threshold,
                        [&](std::size_t c) { return static_cast<double>(img(row, c)); });
}

}  // namespace usbeam
