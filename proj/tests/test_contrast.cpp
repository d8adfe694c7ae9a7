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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "usbeam/contrast.hpp"

namespace usbeam {
namespace {

/// Left half lesion, right half background.
RegionMask halves(std::size_t rows, std::size_t cols) {
  RegionMask m{Mask(rows, cols), Mask(rows, cols)};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) (c < cols / 2 ? m.lesion : m.background)(r, c) = 1;
  }
  return m;
}

TEST(Contrast, ConstantRegionsGiveTheHandContrastRatio) {
  Image img(64, 64);
  for (std::size_t r = 0; r < 64; ++r) {
    for (std::size_t c = 0; c < 64; ++c) img(r, c) = c < 32 ? 0.1f : 0.8f;
  }
  const ContrastReport rep = contrast_metrics(img, halves(64, 64));
  // float(0.1) and float(0.8) carry the representation error of the stored pixels.
  EXPECT_NEAR(rep.cr_db, -20.0 * std::log10(0.1 / 0.8), 1e-6);
  EXPECT_NEAR(rep.cr_db, 18.0618, 1e-4);
  EXPECT_DOUBLE_EQ(rep.gcnr, 1.0);
  EXPECT_EQ(rep.lesion_pixel_count, 64u * 32u);
  EXPECT_EQ(rep.background_pixel_count, 64u * 32u);
  EXPECT_EQ(rep.cnr_db, std::numeric_limits<double>::infinity());  // distinct means, zero spread
}

TEST(Contrast, TwoLevelRegionsGiveTheHandCnr) {
  // Each region alternates mu - sigma and mu + sigma, so the population moments are exact.
  Image img(64, 64);
  for (std::size_t r = 0; r < 64; ++r) {
    for (std::size_t c = 0; c < 64; ++c) {
      const double mu = c < 32 ? 0.2 : 0.6;
      img(r, c) = static_cast<float>(mu + ((r + c) % 2 == 0 ? 0.1 : -0.1));
    }
  }
  const ContrastReport rep = contrast_metrics(img, halves(64, 64));
  EXPECT_NEAR(rep.cnr_db, 20.0 * std::log10(0.4 / std::sqrt(0.02)), 1e-4);
  EXPECT_NEAR(rep.cnr_db, 9.0309, 1e-4);
}

TEST(Contrast, DegenerateValuesAreInfinite) {
  Image img(8, 8, 0.5f);
  for (std::size_t r = 0; r < 8; ++r) {
    for (std::size_t c = 0; c < 4; ++c) img(r, c) = 0.0f;
  }
  EXPECT_TRUE(std::isinf(contrast_metrics(img, halves(8, 8)).cr_db));
  const ContrastReport same = contrast_metrics(Image(8, 8, 0.3f), halves(8, 8));
  EXPECT_EQ(same.cnr_db, -std::numeric_limits<double>::infinity());
  EXPECT_EQ(same.gcnr, 0.0);
}

TEST(Contrast, RejectsEmptyAndMismatchedMasks) {
  const Image img(8, 8, 0.5f);
  RegionMask m = halves(8, 8);
  m.lesion = Mask(8, 8);
  EXPECT_THROW(contrast_metrics(img, m), InvalidArgument);
  EXPECT_THROW(contrast_metrics(Image(8, 9, 0.5f), halves(8, 8)), InvalidArgument);
}

TEST(Gcnr, DisjointSupportsGiveOne) {
  std::vector<double> a(1000), b(1000);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : a) v = u(rng) * 0.4;
  for (double& v : b) v = 0.6 + u(rng) * 0.4;
  EXPECT_DOUBLE_EQ(gcnr(a, b), 1.0);
}

TEST(Gcnr, IdenticalSamplesGiveZero) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(10000);
  for (double& v : a) v = u(rng);
  std::vector<double> b = a;
  std::shuffle(b.begin(), b.end(), rng);
  EXPECT_NEAR(gcnr(a, b), 0.0, 1e-12);
}

// Independent draws from one density leave a histogram-noise floor of about
// sqrt(2 / pi) * sqrt(bins / (2 n)) for n samples per region.
double sampling_floor(std::size_t bins, std::size_t n) {
  return std::sqrt(2.0 / std::numbers::pi) * std::sqrt(static_cast<double>(bins) / (2.0 * static_cast<double>(n)));
}

double independent_draws_gcnr(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(n), b(n);
  for (double& v : a) v = u(rng);
  for (double& v : b) v = u(rng);
  return gcnr(a, b);
}

TEST(Gcnr, IndependentDrawsSitAtTheSamplingFloor) {
  for (std::size_t n : {10000u, 100000u}) {
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) mean += independent_draws_gcnr(n, 100 + s) / 20.0;
    EXPECT_NEAR(mean, sampling_floor(256, n), 0.1 * sampling_floor(256, n)) << "n " << n;
  }
}

TEST(Gcnr, IndependentDrawsFromOneDensityStayBelowBinningTolerance) {
  EXPECT_LE(independent_draws_gcnr(10000, 2), 0.05);
}

TEST(Gcnr, HalfOverlappingUniformsGiveOneHalf) {
  // Stratified draws from U[0, 1) and U[0.5, 1.5).
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 10000;
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = (static_cast<double>(i) + u(rng)) / static_cast<double>(n);
    b[i] = 0.5 + (static_cast<double>(i) + u(rng)) / static_cast<double>(n);
  }
  EXPECT_NEAR(gcnr(a, b), 0.5, 0.03);
}

TEST(Gcnr, IsSymmetricAndBounded) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(500), b(700);
  for (double& v : a) v = n(rng);
  for (double& v : b) v = n(rng) + 1.0;
  const double g = gcnr(a, b);
  EXPECT_DOUBLE_EQ(g, gcnr(b, a));
  EXPECT_GT(g, 0.0);
  EXPECT_LT(g, 1.0);
  EXPECT_THROW(gcnr(std::vector<double>{}, b), InvalidArgument);
}

double ks_statistic(std::vector<float> a, std::vector<float> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const float x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

TEST(HistogramMatch, OutputDistributionFollowsTheReference) {
  const std::size_t rows = 200, cols = 200;
  Image img(rows, cols), ref(rows, cols);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (float& v : img.values()) v = u(rng) * u(rng);                // skewed low
  for (float& v : ref.values()) v = std::sqrt(u(rng));              // skewed high
  const Image out = histogram_match(img, ref, 256);
  const std::vector<float> o(out.values().begin(), out.values().end());
  const std::vector<float> r(ref.values().begin(), ref.values().end());
  const std::vector<float> i0(img.values().begin(), img.values().end());
  EXPECT_LT(ks_statistic(o, r), 0.01);
  EXPECT_GT(ks_statistic(i0, r), 0.3);
}

TEST(HistogramMatch, IsMonotoneAndMapsOntoReferenceValues) {
  const Image img = test::random_image(50, 60, 6);
  const Image ref = test::textured_image(50, 60, 7);
  const Image out = histogram_match(img, ref);
  std::vector<std::size_t> order(img.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return img.values()[x] < img.values()[y]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    ASSERT_LE(out.values()[order[k - 1]], out.values()[order[k]]);
  }
  std::vector<float> refs(ref.values().begin(), ref.values().end());
  std::sort(refs.begin(), refs.end());
  for (float v : out.values()) ASSERT_TRUE(std::binary_search(refs.begin(), refs.end(), v));
}

TEST(HistogramMatch, SelfMatchingPreservesContrastToBinningPrecision) {
  const Image img = test::textured_image(128, 128, 8);
  const Image out = histogram_match(img, img);
  for (std::size_t i = 0; i < img.size(); ++i) ASSERT_NEAR(out.values()[i], img.values()[i], 0.02);
}

}  // namespace
}  // namespace usbeam
