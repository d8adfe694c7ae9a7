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

#include "usbeam/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace usbeam {

double ProbeConfig::max_depth() const {
  return static_cast<double>(num_samples) * sound_speed / (2.0 * sample_rate);
}

double ProbeConfig::sample_depth(double t) const {
  return t * sound_speed / (2.0 * sample_rate);
}

double ProbeConfig::element_x(std::size_t e) const {
  return (static_cast<double>(e) - 0.5 * (static_cast<double>(num_elements) - 1.0)) *
         element_pitch;
}

double ProbeConfig::line_pitch() const {
  return static_cast<double>(num_elements) * element_pitch / static_cast<double>(num_lines);
}

double ProbeConfig::line_x(double l) const {
  return (l - 0.5 * static_cast<double>(num_lines)) * line_pitch();
}

void ProbeConfig::validate() const {
  auto fail = [](const std::string& what) { throw InvalidArgument("ProbeConfig: " + what); };
  if (num_elements < 2) fail("num_elements must be >= 2");
  if (num_samples < 1) fail("num_samples must be >= 1");
  if (num_lines < 1) fail("num_lines must be >= 1");
  for (double v : {element_pitch, center_freq, sample_rate, sound_speed}) {
    if (!(std::isfinite(v) && v > 0.0)) fail("physical quantities must be finite and positive");
  }
  if (!(sample_rate > 2.0 * center_freq)) fail("sample_rate must exceed twice center_freq");
}

ProbeConfig ProbeConfig::with_header_precision() const {
  ProbeConfig p = *this;
  p.element_pitch = static_cast<float>(element_pitch);
  p.center_freq = static_cast<float>(center_freq);
  p.sample_rate = static_cast<float>(sample_rate);
  p.sound_speed = static_cast<float>(sound_speed);
  return p;
}

ProbeConfig ProbeConfig::reduced() {
  ProbeConfig p;
  p.num_elements = 64;
  p.num_samples = 1024;
  p.num_lines = 64;
  return p;
}

ChannelData::ChannelData(const ProbeConfig& probe, Alignment alignment)
    : probe_(probe.with_header_precision()), alignment_(alignment) {
  probe_.validate();
  samples_.assign(probe_.num_elements * probe_.num_samples * probe_.num_lines, 0.0f);
}

ChannelData::ChannelData(const ProbeConfig& probe, Alignment alignment, Shape shape,
                         std::vector<float> samples)
    : probe_(probe.with_header_precision()), alignment_(alignment), samples_(std::move(samples)) {
  probe_.validate();
  const Shape expected{probe_.num_elements, probe_.num_samples, probe_.num_lines};
  if (shape != expected) {
    throw InvalidArgument("ChannelData: tensor shape (" + std::to_string(shape.elements) + ", " +
                          std::to_string(shape.samples) + ", " + std::to_string(shape.lines) +
                          ") does not match probe [elements, samples, lines] (" +
                          std::to_string(expected.elements) + ", " +
                          std::to_string(expected.samples) + ", " +
                          std::to_string(expected.lines) + ")");
  }
  if (samples_.size() != expected.size()) {
    throw InvalidArgument("ChannelData: payload has " + std::to_string(samples_.size()) +
                          " values, expected " + std::to_string(expected.size()));
  }
  if (!all_finite()) throw InvalidArgument("ChannelData: payload contains non-finite values");
}

std::span<const float> ChannelData::element_slice(std::size_t e) const {
  const std::size_t n = probe_.num_samples * probe_.num_lines;
  return std::span<const float>(samples_).subspan(e * n, n);
}

std::span<float> ChannelData::element_slice(std::size_t e) {
  const std::size_t n = probe_.num_samples * probe_.num_lines;
  return std::span<float>(samples_).subspan(e * n, n);
}

bool ChannelData::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(), [](float v) { return std::isfinite(v); });
}

BModeImage::BModeImage(double dynamic_range_db)
    : pixels_(kBModeSize, kBModeSize, 0.0f), dynamic_range_db_(dynamic_range_db) {
  if (!(dynamic_range_db > 0.0)) throw InvalidArgument("BModeImage: dynamic range must be > 0");
}

BModeImage::BModeImage(Image pixels, double dynamic_range_db)
    : pixels_(std::move(pixels)), dynamic_range_db_(dynamic_range_db) {
  if (!(dynamic_range_db > 0.0)) throw InvalidArgument("BModeImage: dynamic range must be > 0");
  if (pixels_.rows() != kBModeSize || pixels_.cols() != kBModeSize) {
    throw InvalidArgument("BModeImage: expected 1024x1024 pixels, got " +
                          std::to_string(pixels_.rows()) + "x" + std::to_string(pixels_.cols()));
  }
  for (float v : pixels_.values()) {
    if (!(v >= 0.0f && v <= 1.0f)) throw InvalidArgument("BModeImage: pixel outside [0, 1]");
  }
}

void RegionMask::validate() const {
  if (lesion.rows() != background.rows() || lesion.cols() != background.cols()) {
    throw InvalidArgument("RegionMask: lesion and background shapes differ");
  }
  const auto a = lesion.values();
  const auto b = background.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) throw InvalidArgument("RegionMask: lesion and background overlap");
  }
}

PixelGeometry::PixelGeometry(const ProbeConfig& p, std::size_t r, std::size_t c)
    : probe(p), rows(r), cols(c) {
  if (rows < 2 || cols < 2) throw InvalidArgument("PixelGeometry: need at least 2x2 pixels");
}

double PixelGeometry::sample_of_row(std::size_t r) const {
  return static_cast<double>(r) * static_cast<double>(probe.num_samples - 1) /
         static_cast<double>(rows - 1);
}

double PixelGeometry::line_of_col(std::size_t c) const {
  return static_cast<double>(c) * static_cast<double>(probe.num_lines - 1) /
         static_cast<double>(cols - 1);
}

double PixelGeometry::depth(std::size_t r) const { return probe.sample_depth(sample_of_row(r)); }

double PixelGeometry::lateral(std::size_t c) const { return probe.line_x(line_of_col(c)); }

}  // namespace usbeam
