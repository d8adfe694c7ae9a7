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

#include "usbeam/contrast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace usbeam {
namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population
};

Moments moments(std::span<const double> v) {
  Moments m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.variance = ss / static_cast<double>(v.size());
  return m;
}

std::size_t bin_of(double v, double lo, double width, std::size_t bins) {
  if (width <= 0.0) return 0;
  const double pos = (v - lo) / width;
  if (!(pos > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(pos), bins - 1);
}

}  // namespace

double gcnr(std::span<const double> a, std::span<const double> b, std::size_t bins) {
  if (a.empty() || b.empty()) throw InvalidArgument("gcnr: empty region");
  if (bins < 1) throw InvalidArgument("gcnr: need at least one bin");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : a) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : b) lo = std::min(lo, v), hi = std::max(hi, v);
  const double width = (hi - lo) / static_cast<double>(bins);

  std::vector<std::size_t> ha(bins, 0), hb(bins, 0);
  for (double v : a) ++ha[bin_of(v, lo, width, bins)];
  for (double v : b) ++hb[bin_of(v, lo, width, bins)];
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double overlap = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    overlap += std::min(static_cast<double>(ha[k]) / na, static_cast<double>(hb[k]) / nb);
  }
  return std::clamp(1.0 - overlap, 0.0, 1.0);
}

ContrastReport contrast_metrics(const Image& img, const RegionMask& mask, std::size_t bins) {
  mask.validate();
  if (mask.lesion.rows() != img.rows() || mask.lesion.cols() != img.cols()) {
    throw InvalidArgument("contrast_metrics: mask and image shapes differ");
  }
  std::vector<double> lesion;
  std::vector<double> background;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (mask.lesion.values()[i]) lesion.push_back(img.values()[i]);
    if (mask.background.values()[i]) background.push_back(img.values()[i]);
  }
  if (lesion.empty()) throw InvalidArgument("contrast_metrics: empty lesion region");
  if (background.empty()) throw InvalidArgument("contrast_metrics: empty background region");

  const Moments c = moments(lesion);
  const Moments b = moments(background);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  ContrastReport r;
  r.lesion_pixel_count = lesion.size();
  r.background_pixel_count = background.size();
  r.cnr_db = c.mean == b.mean
                 ? -kInf
                 : 20.0 * std::log10(std::abs(c.mean - b.mean) / std::sqrt(c.variance + b.variance));
  r.cr_db = c.mean == 0.0 ? kInf : -20.0 * std::log10(c.mean / b.mean);
  r.gcnr = gcnr(lesion, background, bins);
  return r;
}

ContrastReport contrast_metrics(const BModeImage& img, const RegionMask& mask, std::size_t bins) {
  return contrast_metrics(img.pixels(), mask, bins);
}

Image histogram_match(const Image& img, const Image& reference, std::size_t bins) {
  if (bins < 1) throw InvalidArgument("histogram_match: need at least one bin");
  if (img.size() == 0 || reference.size() == 0) throw InvalidArgument("histogram_match: empty image");

  std::vector<float> sorted(reference.values().begin(), reference.values().end());
  std::sort(sorted.begin(), sorted.end());

  const double scale = static_cast<double>(bins);
  std::vector<double> counts(bins, 0.0);
  for (float v : img.values()) {
    ++counts[bin_of(std::clamp(static_cast<double>(v), 0.0, 1.0), 0.0, 1.0 / scale, bins)];
  }
  std::vector<double> below(bins, 0.0);  // pixels in lower bins
  for (std::size_t k = 1; k < bins; ++k) below[k] = below[k - 1] + counts[k - 1];

  const double n = static_cast<double>(img.size());
  const double n_ref = static_cast<double>(sorted.size());
  Image out(img.rows(), img.cols());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = std::clamp(static_cast<double>(img.values()[i]), 0.0, 1.0);
    const std::size_t k = bin_of(v, 0.0, 1.0 / scale, bins);
    const double frac = std::clamp(v * scale - static_cast<double>(k), 0.0, 1.0);
    const double rank = below[k] + frac * counts[k];
    const auto idx = static_cast<std::size_t>(std::floor(rank * n_ref / n));
    out.values()[i] = sorted[std::min(idx, sorted.size() - 1)];
  }
  return out;
}

BModeImage histogram_match(const BModeImage& img, const BModeImage& reference, std::size_t bins) {
  return BModeImage(histogram_match(img.pixels(), reference.pixels(), bins), img.dynamic_range_db());
}

}  // namespace usbeam
