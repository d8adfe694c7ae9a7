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

#include <cstring>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "usbeam/io.hpp"
#include "usbeam/rng.hpp"

namespace usbeam {
namespace {

using test::TempDir;

std::vector<unsigned char> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& p, const std::vector<unsigned char>& b) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

TEST(ProbeConfig, ElementsAreSymmetricAboutTheAxis) {
  const ProbeConfig p;
  for (std::size_t e = 0; e < p.num_elements; ++e) {
    EXPECT_DOUBLE_EQ(p.element_x(e), -p.element_x(p.num_elements - 1 - e));
  }
  EXPECT_NEAR(p.element_x(1) - p.element_x(0), p.element_pitch, 1e-15);
}

TEST(ProbeConfig, CentreLineIsOnAxisAndLinesSpanTheAperture) {
  const ProbeConfig p;
  EXPECT_DOUBLE_EQ(p.line_x(static_cast<double>(p.num_lines) / 2.0), 0.0);
  EXPECT_DOUBLE_EQ(p.line_pitch() * static_cast<double>(p.num_lines),
                   p.element_pitch * static_cast<double>(p.num_elements));
}

TEST(ProbeConfig, DepthFollowsTwoWayTravel) {
  const ProbeConfig p;
  EXPECT_DOUBLE_EQ(p.sample_depth(2.0 * p.sample_rate / p.sound_speed), 1.0);
  EXPECT_DOUBLE_EQ(p.max_depth(), p.sample_depth(static_cast<double>(p.num_samples)));
}

TEST(ProbeConfig, ValidateRejectsDegenerateGeometry) {
  ProbeConfig p;
  p.num_elements = 1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = ProbeConfig{};
  p.sample_rate = 10e6;  // below Nyquist for 7.6 MHz
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = ProbeConfig{};
  p.sound_speed = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  EXPECT_NO_THROW(ProbeConfig{}.validate());
  EXPECT_NO_THROW(ProbeConfig::reduced().validate());
}

TEST(ChannelData, IndexMatchesTheDocumentedLayout) {
  const ProbeConfig p = test::tiny_probe(3, 5, 7);
  ChannelData cd(p, Alignment::kRaw);
  EXPECT_EQ(cd.index(2, 4, 6), (2u * 5u + 4u) * 7u + 6u);
  cd(1, 2, 3) = 4.5f;
  EXPECT_EQ(cd.samples()[(1 * 5 + 2) * 7 + 3], 4.5f);
  EXPECT_EQ(cd.element_slice(1)[2 * 7 + 3], 4.5f);
}

TEST(ChannelData, RejectsMismatchedShapeAndNonFinitePayload) {
  const ProbeConfig p = test::tiny_probe(2, 3, 4);
  EXPECT_THROW(ChannelData(p, Alignment::kRaw, Shape{2, 4, 3}, std::vector<float>(24)), InvalidArgument);
  EXPECT_THROW(ChannelData(p, Alignment::kRaw, Shape{2, 3, 4}, std::vector<float>(23)), InvalidArgument);
  std::vector<float> bad(24, 0.0f);
  bad[5] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(ChannelData(p, Alignment::kRaw, Shape{2, 3, 4}, bad), InvalidArgument);
}

TEST(Rng, DerivedSeedsAreDeterministicAndDistinct) {
  const SeedSpec s{42};
  EXPECT_EQ(derive_seed(s, 3), derive_seed(s, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(s, i).seed);
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(SeedSpec{1}, 0), derive_seed(SeedSpec{2}, 0));
}

TEST(Rng, UniformIndexIsInclusiveAndCoversTheRange) {
  Engine e = make_engine(SeedSpec{7});
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const auto v = uniform_index(e, 10, 14);
    ASSERT_GE(v, 10u);
    ASSERT_LE(v, 14u);
    ++hits[v - 10];
  }
  for (int h : hits) EXPECT_GT(h, 800);
  EXPECT_EQ(uniform_index(e, 3, 3), 3u);
}

TEST(Rng, UniformRealIsHalfOpen) {
  Engine e = make_engine(SeedSpec{9});
  for (int i = 0; i < 10000; ++i) {
    const double v = uniform_real(e, -1.0, 2.0);
    ASSERT_GE(v, -1.0);
    ASSERT_LT(v, 2.0);
  }
}

TEST(Uscd, RoundTripIsExact) {
  TempDir dir("core");
  const ChannelData cd = test::random_channel_data(test::tiny_probe(4, 33, 5), Alignment::kTofCorrected, 11);
  write_channel_data(cd, dir / "a.uscd");
  const ChannelData back = read_channel_data(dir / "a.uscd");
  EXPECT_EQ(back, cd);
  EXPECT_EQ(back.alignment(), Alignment::kTofCorrected);
  EXPECT_EQ(std::filesystem::file_size(dir / "a.uscd"), kUscdHeaderSize + 4 * cd.size());
}

TEST(Uscd, HeaderFieldsSitAtTheirOffsets) {
  TempDir dir("core");
  const ChannelData cd(test::tiny_probe(4, 6, 5), Alignment::kRaw);
  write_channel_data(cd, dir / "a.uscd");
  const auto b = read_bytes(dir / "a.uscd");
  ASSERT_GE(b.size(), kUscdHeaderSize);
  EXPECT_EQ(std::memcmp(b.data(), "USCD", 4), 0);
  EXPECT_EQ(b[4], 1);
  std::uint32_t dims[3];
  std::memcpy(dims, b.data() + 8, 12);
  EXPECT_EQ(dims[0], 4u);
  EXPECT_EQ(dims[1], 6u);
  EXPECT_EQ(dims[2], 5u);
  float fs = 0.0f;
  std::memcpy(&fs, b.data() + 20, 4);
  EXPECT_EQ(fs, 31.25e6f);
  EXPECT_EQ(b[36], 0);
}

TEST(Uscd, MalformedFilesAreRejected) {
  TempDir dir("core");
  const ChannelData cd(test::tiny_probe(2, 4, 2), Alignment::kRaw);
  write_channel_data(cd, dir / "ok.uscd");
  const auto good = read_bytes(dir / "ok.uscd");

  auto bad_magic = good;
  bad_magic[0] = 'X';
  write_bytes(dir / "magic.uscd", bad_magic);
  EXPECT_THROW(read_channel_data(dir / "magic.uscd"), FormatError);

  auto bad_version = good;
  bad_version[4] = 2;
  write_bytes(dir / "version.uscd", bad_version);
  EXPECT_THROW(read_channel_data(dir / "version.uscd"), FormatError);

  auto truncated = good;
  truncated.pop_back();
  write_bytes(dir / "short.uscd", truncated);
  EXPECT_THROW(read_channel_data(dir / "short.uscd"), FormatError);

  auto huge = good;
  const std::uint32_t big = 0xFFFFFFFFu;
  for (int i = 0; i < 3; ++i) std::memcpy(huge.data() + 8 + 4 * i, &big, 4);
  write_bytes(dir / "huge.uscd", huge);
  EXPECT_THROW(read_channel_data(dir / "huge.uscd"), FormatError);

  auto align = good;
  align[36] = 7;
  write_bytes(dir / "align.uscd", align);
  EXPECT_THROW(read_channel_data(dir / "align.uscd"), FormatError);

  EXPECT_THROW(read_channel_data(dir / "missing.uscd"), IoError);
}

TEST(Png, QuantisedImagesRoundTripExactly) {
  TempDir dir("core");
  Image img(17, 23);
  std::mt19937_64 rng(5);
  for (float& v : img.values()) v = static_cast<float>(rng() % 65536) / 65535.0f;
  write_image(img, dir / "a.png");
  const Image back = read_image(dir / "a.png");
  EXPECT_EQ(back, img);
}

TEST(Png, BModeImageReReadIsStable) {
  TempDir dir("core");
  const BModeImage img(test::random_image(kBModeSize, kBModeSize, 3));
  write_image(img, dir / "a.png");
  const Image once = read_image(dir / "a.png");
  for (std::size_t i = 0; i < once.size(); ++i) {
    ASSERT_NEAR(once.values()[i], img.pixels().values()[i], 0.5 / 65535.0 + 1e-7);
  }
  write_image(once, dir / "b.png");
  EXPECT_EQ(read_image(dir / "b.png"), once);
  EXPECT_EQ(read_bytes(dir / "a.png"), read_bytes(dir / "b.png"));
}

TEST(Png, MaskRoundTrip) {
  TempDir dir("core");
  Mask m(9, 12);
  for (std::size_t i = 0; i < m.size(); ++i) m.values()[i] = (i * 7) % 3 == 0 ? 1 : 0;
  write_mask(m, dir / "m.png");
  EXPECT_EQ(read_mask(dir / "m.png"), m);
}

TEST(RegionMask, OverlapAndShapeMismatchAreRejected) {
  RegionMask r{Mask(4, 4), Mask(4, 4)};
  r.lesion(1, 1) = 1;
  r.background(2, 2) = 1;
  EXPECT_NO_THROW(r.validate());
  r.background(1, 1) = 1;
  EXPECT_THROW(r.validate(), InvalidArgument);
  EXPECT_THROW((RegionMask{Mask(4, 4), Mask(4, 5)}.validate()), InvalidArgument);
}

TEST(BModeImage, RejectsWrongSizeAndOutOfRangePixels) {
  EXPECT_THROW(BModeImage(Image(10, 10)), InvalidArgument);
  Image img(kBModeSize, kBModeSize);
  img(0, 0) = 1.5f;
  EXPECT_THROW(BModeImage{img}, InvalidArgument);
}

TEST(PixelGeometry, CornersAreAligned) {
  const ProbeConfig p = ProbeConfig::reduced();
  const PixelGeometry g(p);
  EXPECT_DOUBLE_EQ(g.sample_of_row(0), 0.0);
  EXPECT_DOUBLE_EQ(g.sample_of_row(kBModeSize - 1), static_cast<double>(p.num_samples - 1));
  EXPECT_DOUBLE_EQ(g.line_of_col(kBModeSize - 1), static_cast<double>(p.num_lines - 1));
}

}  // namespace
}  // namespace usbeam
