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

#include "usbeam/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace usbeam {
namespace {

constexpr std::array<char, 4> kMagic = {'U', 'S', 'C', 'D'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument(std::string("USCD: ") + what + " does not fit in u32");
  }
  return static_cast<std::uint32_t>(v);
}

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return bytes;
}

std::uint16_t to_sample(float p) {
  const double clamped = std::clamp(static_cast<double>(p), 0.0, 1.0);
  return static_cast<std::uint16_t>(std::lround(clamped * 65535.0));
}

void write_gray16(std::size_t rows, std::size_t cols, const std::vector<png_uint_16>& buf,
                  const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(cols);
  image.height = static_cast<png_uint_32>(rows);
  image.format = PNG_FORMAT_LINEAR_Y;
  const int ok = png_image_write_to_file(&image, path.c_str(), 0, buf.data(), 0, nullptr);
  if (!ok) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot write PNG " + path.string() + ": " + msg);
  }
}

}  // namespace

void write_channel_data(const ChannelData& cd, const std::filesystem::path& path) {
  if (!cd.all_finite()) throw InvalidArgument("write_channel_data: non-finite samples");

  const ProbeConfig& p = cd.probe();
  std::vector<std::uint8_t> header;
  header.reserve(kUscdHeaderSize);
  header.insert(header.end(), kMagic.begin(), kMagic.end());
  header.push_back(kUscdVersion);
  header.insert(header.end(), 3, 0);
  put_u32(header, checked_u32(p.num_elements, "E"));
  put_u32(header, checked_u32(p.num_samples, "T"));
  put_u32(header, checked_u32(p.num_lines, "L"));
  put_f32(header, static_cast<float>(p.sample_rate));
  put_f32(header, static_cast<float>(p.center_freq));
  put_f32(header, static_cast<float>(p.sound_speed));
  put_f32(header, static_cast<float>(p.element_pitch));
  header.push_back(static_cast<std::uint8_t>(cd.alignment()));
  header.insert(header.end(), 3, 0);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));

  // Payload streamed in chunks; samples are encoded little-endian explicitly.
  std::vector<std::uint8_t> chunk;
  constexpr std::size_t kChunk = 1 << 16;
  const auto samples = cd.samples();
  for (std::size_t i = 0; i < samples.size(); i += kChunk) {
    chunk.clear();
    const std::size_t end = std::min(samples.size(), i + kChunk);
    for (std::size_t j = i; j < end; ++j) put_f32(chunk, samples[j]);
    out.write(reinterpret_cast<const char*>(chunk.data()), static_cast<std::streamsize>(chunk.size()));
  }
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

ChannelData read_channel_data(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_all(path);
  if (bytes.size() < kUscdHeaderSize) throw FormatError("USCD: truncated header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError("USCD: bad magic");
  }
  if (bytes[4] != kUscdVersion) {
    throw FormatError("USCD: unsupported version " + std::to_string(bytes[4]));
  }

  const std::uint64_t e = get_u32(&bytes[8]);
  const std::uint64_t t = get_u32(&bytes[12]);
  const std::uint64_t l = get_u32(&bytes[16]);
  // Each factor is < 2^32, so e * t cannot overflow 64 bits; check the rest.
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t et = e * t;
  if (l != 0 && et > (kMax - kUscdHeaderSize) / 4 / l) throw FormatError("USCD: dimension overflow");
  const std::uint64_t count = et * l;
  const std::uint64_t payload = count * 4;
  if (payload > std::numeric_limits<std::size_t>::max() - kUscdHeaderSize) {
    throw FormatError("USCD: dimension overflow");
  }
  const std::size_t expected = kUscdHeaderSize + static_cast<std::size_t>(payload);
  if (bytes.size() < expected) throw FormatError("USCD: truncated payload");
  if (bytes.size() > expected) throw FormatError("USCD: trailing bytes after payload");

  const std::uint8_t align = bytes[36];
  if (align > 1) throw FormatError("USCD: invalid alignment byte " + std::to_string(align));

  ProbeConfig probe;
  probe.num_elements = static_cast<std::size_t>(e);
  probe.num_samples = static_cast<std::size_t>(t);
  probe.num_lines = static_cast<std::size_t>(l);
  probe.sample_rate = get_f32(&bytes[20]);
  probe.center_freq = get_f32(&bytes[24]);
  probe.sound_speed = get_f32(&bytes[28]);
  probe.element_pitch = get_f32(&bytes[32]);

  std::vector<float> samples(static_cast<std::size_t>(count));
  const std::uint8_t* p = bytes.data() + kUscdHeaderSize;
  for (std::size_t i = 0; i < samples.size(); ++i, p += 4) samples[i] = get_f32(p);

  try {
    return ChannelData(probe, static_cast<Alignment>(align),
                       Shape{probe.num_elements, probe.num_samples, probe.num_lines},
                       std::move(samples));
  } catch (const InvalidArgument& ex) {
    throw FormatError(std::string("USCD: ") + ex.what());
  }
}

void write_image(const BModeImage& img, const std::filesystem::path& path) {
  write_image(img.pixels(), path);
}

void write_image(const Image& img, const std::filesystem::path& path) {
  std::vector<png_uint_16> buf(img.size());
  const auto px = img.values();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = to_sample(px[i]);
  write_gray16(img.rows(), img.cols(), buf, path);
}

Image read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw FormatError("cannot read PNG " + path.string() + ": " + image.message);
  }
  const bool sixteen = (image.format & PNG_FORMAT_FLAG_LINEAR) != 0;
  if ((image.format & PNG_FORMAT_FLAG_COLOR) != 0 || (image.format & PNG_FORMAT_FLAG_ALPHA) != 0) {
    png_image_free(&image);
    throw FormatError("PNG " + path.string() + " is not single-channel grayscale");
  }
  image.format = sixteen ? PNG_FORMAT_LINEAR_Y : PNG_FORMAT_GRAY;
  const std::size_t rows = image.height;
  const std::size_t cols = image.width;
  Image out(rows, cols);
  auto px = out.values();
  if (sixteen) {
    std::vector<png_uint_16> buf(rows * cols);
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
      throw FormatError("cannot decode PNG " + path.string() + ": " + image.message);
    }
    for (std::size_t i = 0; i < buf.size(); ++i) px[i] = static_cast<float>(buf[i] / 65535.0);
  } else {
    std::vector<png_byte> buf(rows * cols);
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
      throw FormatError("cannot decode PNG " + path.string() + ": " + image.message);
    }
    for (std::size_t i = 0; i < buf.size(); ++i) px[i] = static_cast<float>(buf[i] / 255.0);
  }
  return out;
}

void write_mask(const Mask& mask, const std::filesystem::path& path) {
  std::vector<png_uint_16> buf(mask.size());
  const auto v = mask.values();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = v[i] ? 65535 : 0;
  write_gray16(mask.rows(), mask.cols(), buf, path);
}

Mask read_mask(const std::filesystem::path& path) {
  const Image img = read_image(path);
  Mask m(img.rows(), img.cols());
  const auto src = img.values();
  auto dst = m.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > 0.0f ? 1 : 0;
  return m;
}

}  // namespace usbeam
