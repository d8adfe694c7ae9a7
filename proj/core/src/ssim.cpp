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

#include "usbeam/ssim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace usbeam {
namespace {

/// Separable "valid" filtering: output is (rows - n + 1) x (cols - n + 1).
Grid<double> filter_valid(const Grid<double>& img, const std::vector<double>& taps) {
  const std::size_t n = taps.size();
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  const std::size_t out_cols = cols - n + 1;
  const std::size_t out_rows = rows - n + 1;

  Grid<double> horizontal(rows, out_cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += taps[k] * img(r, c + k);
      horizontal(r, c) = s;
    }
  }
  Grid<double> out(out_rows, out_cols);
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const double w = taps[k];
      for (std::size_t c = 0; c < out_cols; ++c) out(r, c) += w * horizontal(r + k, c);
    }
  }
  return out;
}

Grid<double> product(const Grid<double>& a, const Grid<double>& b) {
  Grid<double> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = a.values()[i] * b.values()[i];
  return out;
}

double mean_of(const Grid<double>& g) {
  return std::accumulate(g.values().begin(), g.values().end(), 0.0) / static_cast<double>(g.size());
}

}  // namespace

std::size_t MsSsimParams::min_image_size() const {
  return (std::size_t{1} << (num_scales - 1)) * window_size;
}

void MsSsimParams::validate() const {
  if (!(k1 > 0.0) || !(k2 > 0.0) || !(dynamic_range > 0.0)) {
    throw InvalidArgument("MsSsimParams: k1, k2 and dynamic_range must be > 0");
  }
  if (window_size < 1 || window_size % 2 == 0) throw InvalidArgument("MsSsimParams: window_size must be odd");
  if (!(window_sigma > 0.0)) throw InvalidArgument("MsSsimParams: window_sigma must be > 0");
  if (num_scales < 1 || num_scales > 16) throw InvalidArgument("MsSsimParams: num_scales must lie in [1, 16]");
  if (scale_weights.size() != num_scales) {
    throw InvalidArgument("MsSsimParams: need one scale weight per scale");
  }
  for (double w : scale_weights) {
    if (!(w >= 0.0)) throw InvalidArgument("MsSsimParams: scale weights must be >= 0");
  }
  if (!(luminance_weight >= 0.0)) throw InvalidArgument("MsSsimParams: luminance weight must be >= 0");
}

std::vector<double> gaussian_window(std::size_t size, double sigma) {
  std::vector<double> w(size);
  const double centre = (static_cast<double>(size) - 1.0) / 2.0;
  for (std::size_t i = 0; i < size; ++i) {
    const double d = static_cast<double>(i) - centre;
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return w;
}

Grid<double> to_double(const Image& img) {
  Grid<double> out(img.rows(), img.cols());
  std::copy(img.values().begin(), img.values().end(), out.values().begin());
  return out;
}

SsimMap ssim_map(const Grid<double>& x, const Grid<double>& y, const MsSsimParams& params) {
  params.validate();
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw InvalidArgument("ssim_map: image shapes differ");
  if (x.rows() < params.window_size || x.cols() < params.window_size) {
    throw InvalidArgument("ssim_map: image smaller than the window");
  }
  const std::vector<double> taps = gaussian_window(params.window_size, params.window_sigma);
  const Grid<double> mu_x = filter_valid(x, taps);
  const Grid<double> mu_y = filter_valid(y, taps);
  const Grid<double> e_xx = filter_valid(product(x, x), taps);
  const Grid<double> e_yy = filter_valid(product(y, y), taps);
  const Grid<double> e_xy = filter_valid(product(x, y), taps);
  const double c1 = params.c1();
  const double c2 = params.c2();

  SsimMap out;
  out.ssim = Grid<double>(mu_x.rows(), mu_x.cols());
  out.cs = Grid<double>(mu_x.rows(), mu_x.cols());
  double sum_l = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x.values()[i];
    const double my = mu_y.values()[i];
    const double vx = e_xx.values()[i] - mx * mx;
    const double vy = e_yy.values()[i] - my * my;
    const double cov = e_xy.values()[i] - mx * my;
    const double l = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
    // With C3 = C2 / 2 the contrast and structure terms merge into one ratio.
    const double cs = (2.0 * cov + c2) / (vx + vy + c2);
    out.ssim.values()[i] = l * cs;
    out.cs.values()[i] = cs;
    sum_l += l;
  }
  out.mean_ssim = mean_of(out.ssim);
  out.mean_cs = mean_of(out.cs);
  out.mean_luminance = sum_l / static_cast<double>(mu_x.size());
  return out;
}

SsimMap ssim_map(const Image& x, const Image& y, const MsSsimParams& params) {
  return ssim_map(to_double(x), to_double(y), params);
}

Grid<double> downsample2(const Grid<double>& img) {
  const std::size_t rows = img.rows() / 2;
  const std::size_t cols = img.cols() / 2;
  Grid<double> out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      out(r, c) = 0.25 * (img(2 * r, 2 * c) + img(2 * r, 2 * c + 1) + img(2 * r + 1, 2 * c) +
                          img(2 * r + 1, 2 * c + 1));
    }
  }
  return out;
}

double ms_ssim(const Grid<double>& x, const Grid<double>& y, const MsSsimParams& params) {
  params.validate();
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw InvalidArgument("ms_ssim: image shapes differ");
  const std::size_t min_size = params.min_image_size();
  if (x.rows() < min_size || x.cols() < min_size) {
    throw InvalidArgument("ms_ssim: image smaller than " + std::to_string(min_size) + " pixels for " +
                          std::to_string(params.num_scales) + " scales");
  }
  Grid<double> a = x;
  Grid<double> b = y;
  double result = 1.0;
  for (std::size_t m = 0; m < params.num_scales; ++m) {
    const SsimMap s = ssim_map(a, b, params);
    result *= std::pow(std::max(s.mean_cs, 0.0), params.scale_weights[m]);
    if (m + 1 == params.num_scales) {
      result *= std::pow(std::max(s.mean_luminance, 0.0), params.luminance_weight);
    } else {
      a = downsample2(a);
      b = downsample2(b);
    }
  }
  return result;
}

double ms_ssim(const Image& x, const Image& y, const MsSsimParams& params) {
  return ms_ssim(to_double(x), to_double(y), params);
}

}  // namespace usbeam
