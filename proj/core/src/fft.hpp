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

#ifndef USBEAM_SRC_FFT_HPP
#define USBEAM_SRC_FFT_HPP

// Thin RAII wrappers over FFTW plans. Plans are created with FFTW_ESTIMATE so
// the chosen algorithm, and hence every rounding, is the same on each run.

#include <complex>
#include <cstddef>
#include <span>

namespace usbeam::detail {

/// Real-to-complex forward and complex-to-real backward transforms of size n.
/// backward() is unnormalized: backward(forward(x)) == n * x.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t num_bins() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void backward(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_;
  void* spec_;  // fftw_complex*
  void* fwd_;   // fftw_plan
  void* bwd_;
};

/// Magnitude of the discrete analytic signal of real sequences of length n
/// (one-sided spectrum doubling, Marple's method).
class AnalyticEnvelope {
 public:
  explicit AnalyticEnvelope(std::size_t n);
  ~AnalyticEnvelope();
  AnalyticEnvelope(const AnalyticEnvelope&) = delete;
  AnalyticEnvelope& operator=(const AnalyticEnvelope&) = delete;

  void compute(std::span<const double> in, std::span<double> envelope);

 private:
  std::size_t n_;
  void* buf_;  // fftw_complex*
  void* fwd_;
  void* bwd_;
};

}  // namespace usbeam::detail

#endif  // USBEAM_SRC_FFT_HPP
