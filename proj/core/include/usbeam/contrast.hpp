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

#ifndef USBEAM_CONTRAST_HPP
#define USBEAM_CONTRAST_HPP

#include <cstddef>
#include <span>

#include "usbeam/types.hpp"

namespace usbeam {

inline constexpr std::size_t kDefaultHistogramBins = 256;

/// Degenerate values are +-infinity: CR is +inf when the lesion mean is 0 and
/// CNR is -inf when the two means are equal.
struct ContrastReport {
  double cnr_db = 0.0;
  double gcnr = 0.0;
  double cr_db = 0.0;
  std::size_t lesion_pixel_count = 0;
  std::size_t background_pixel_count = 0;
};

/// 1 - sum_k min(p_a[k], p_b[k]) with both densities estimated by `bins`-bin
/// histograms over the union range of the samples. Throws on empty input.
double gcnr(std::span<const double> a, std::span<const double> b, std::size_t bins = kDefaultHistogramBins);

/// Lesion (c) vs background (b) statistics with population standard deviations.
ContrastReport contrast_metrics(const Image& img, const RegionMask& mask,
                                std::size_t bins = kDefaultHistogramBins);
ContrastReport contrast_metrics(const BModeImage& img, const RegionMask& mask,
                                std::size_t bins = kDefaultHistogramBins);

/// Maps each pixel through the binned CDF of `img` (linear within a bin) to the
/// reference order statistic of the same quantile. Pixels of equal value map
/// to equal outputs; output values are reference values.
Image histogram_match(const Image& img, const Image& reference, std::size_t bins = kDefaultHistogramBins);
BModeImage histogram_match(const BModeImage& img, const BModeImage& reference,
                           std::size_t bins = kDefaultHistogramBins);

}  // namespace usbeam

#endif  // USBEAM_CONTRAST_HPP
