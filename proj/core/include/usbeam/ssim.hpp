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

#ifndef USBEAM_SSIM_HPP
#define USBEAM_SSIM_HPP

#include <cstddef>
#include <vector>

#include "usbeam/types.hpp"

namespace usbeam {

struct MsSsimParams {
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
  std::size_t window_size = 11;
  double window_sigma = 1.5;
  std::size_t num_scales = 5;
  /// Contrast-structure exponents per scale, finest first.
  std::vector<double> scale_weights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
  /// Luminance exponent, applied at the coarsest scale only.
  double luminance_weight = 0.1333;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
  double c3() const { return c2() / 2.0; }

  /// Smallest image side accepted by ms_ssim: 2^(M - 1) * window_size.
  std::size_t min_image_size() const;

  void validate() const;
};

/// Normalised 1-D Gaussian taps.
std::vector<double> gaussian_window(std::size_t size, double sigma);

struct SsimMap {
  /// Per-pixel SSIM over the valid region, (rows - w + 1) x (cols - w + 1).
  Grid<double> ssim;
  /// Per-pixel contrast-structure term (2 s_xy + C2) / (s_x^2 + s_y^2 + C2).
  Grid<double> cs;
  double mean_ssim = 0.0;
  double mean_cs = 0.0;
  double mean_luminance = 0.0;
};

/// Single-scale SSIM with unit exponents and C3 = C2 / 2. Throws
/// InvalidArgument on a shape mismatch or images smaller than the window.
SsimMap ssim_map(const Grid<double>& x, const Grid<double>& y, const MsSsimParams& params = {});
SsimMap ssim_map(const Image& x, const Image& y, const MsSsimParams& params = {});

/// 2 x 2 mean downsampling; odd trailing rows and columns are dropped.
Grid<double> downsample2(const Grid<double>& img);

/// Multi-scale SSIM. Negative per-scale means are clamped to 0 before
/// exponentiation, so the result lies in [0, 1].
double ms_ssim(const Image& x, const Image& y, const MsSsimParams& params = {});
double ms_ssim(const Grid<double>& x, const Grid<double>& y, const MsSsimParams& params = {});

Grid<double> to_double(const Image& img);

}  // namespace usbeam

#endif  // USBEAM_SSIM_HPP
