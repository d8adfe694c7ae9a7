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

#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace usbeam::detail {

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("RealFft: size must be > 0");
  real_ = fftw_alloc_real(n);
  auto* spec = fftw_alloc_complex(n / 2 + 1);
  spec_ = spec;
  const int size = static_cast<int>(n);
  fwd_ = fftw_plan_dft_r2c_1d(size, real_, spec, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r_1d(size, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(n_), real_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  const auto* spec = static_cast<const fftw_complex*>(spec_);
  for (std::size_t k = 0; k < num_bins(); ++k) out[k] = {spec[k][0], spec[k][1]};
}

void RealFft::backward(std::span<const std::complex<double>> in, std::span<double> out) {
  auto* spec = static_cast<fftw_complex*>(spec_);
  for (std::size_t k = 0; k < num_bins(); ++k) {
    spec[k][0] = in[k].real();
    spec[k][1] = in[k].imag();
  }
  // c2r destroys its input; spec_ is scratch so that is fine.
  fftw_execute(static_cast<fftw_plan>(bwd_));
  std::copy(real_, real_ + n_, out.begin());
}

AnalyticEnvelope::AnalyticEnvelope(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("AnalyticEnvelope: size must be > 0");
  auto* buf = fftw_alloc_complex(n);
  buf_ = buf;
  const int size = static_cast<int>(n);
  fwd_ = fftw_plan_dft_1d(size, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(size, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

AnalyticEnvelope::~AnalyticEnvelope() {
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(buf_);
}

void AnalyticEnvelope::compute(std::span<const double> in, std::span<double> envelope) {
  auto* buf = static_cast<fftw_complex*>(buf_);
  for (std::size_t i = 0; i < n_; ++i) {
    buf[i][0] = in[i];
    buf[i][1] = 0.0;
  }
  fftw_execute(static_cast<fftw_plan>(fwd_));
  // Keep DC (and Nyquist for even n), double positive frequencies, drop negative ones.
  const std::size_t half = n_ / 2;
  const bool even = (n_ % 2) == 0;
  const std::size_t last_doubled = even ? half - 1 : half;
  for (std::size_t k = 1; k <= last_doubled; ++k) {
    buf[k][0] *= 2.0;
    buf[k][1] *= 2.0;
  }
  for (std::size_t k = last_doubled + 1 + (even ? 1 : 0); k < n_; ++k) {
    buf[k][0] = 0.0;
    buf[k][1] = 0.0;
  }
  fftw_execute(static_cast<fftw_plan>(bwd_));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) envelope[i] = std::hypot(buf[i][0], buf[i][1]) * scale;
}

}  // namespace usbeam::detail
