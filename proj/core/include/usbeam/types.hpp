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

#ifndef USBEAM_TYPES_HPP
#define USBEAM_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "usbeam/error.hpp"

namespace usbeam {

// Axis convention used everywhere in this library: channel data is indexed
// [element, time sample, scan line] and stored row-major, so the flat index of
// (e, t, l) is ((e * T) + t) * L + l.

/// Transducer geometry, sampling and medium parameters.
///
/// Element e sits at lateral position (e - (E - 1) / 2) * pitch. Scan line l is
/// centred at (l - L / 2) * line_pitch() with line_pitch() = E * pitch / L, so
/// line L / 2 is exactly on the array axis.
struct ProbeConfig {
  std::size_t num_elements = 128;
  double element_pitch = 3.0e-4;   // m
  double center_freq = 7.6e6;      // Hz
  double sample_rate = 31.25e6;    // Hz
  double sound_speed = 1540.0;     // m/s
  std::size_t num_samples = 1579;
  std::size_t num_lines = 128;

  /// Depth covered by the recorded samples, num_samples * c / (2 fs).
  double max_depth() const;
  /// Depth of axial sample t, t * c / (2 fs).
  double sample_depth(double t) const;
  double element_x(std::size_t e) const;
  /// Lateral position of (possibly fractional) scan line index l.
  double line_x(double l) const;
  double line_pitch() const;

  /// Throws InvalidArgument if any invariant is violated.
  void validate() const;

  /// Copy whose physical fields are rounded to float precision, the
  /// precision of the USCD header.
  ProbeConfig with_header_precision() const;

  /// Reduced acquisition grid (64 elements, 1024 samples, 64 lines) used for
  /// fast validation runs.
  static ProbeConfig reduced();

  friend bool operator==(const ProbeConfig&, const ProbeConfig&) = default;
};

enum class Alignment : std::uint8_t { kRaw = 0, kTofCorrected = 1 };

struct Shape {
  std::size_t elements = 0;
  std::size_t samples = 0;
  std::size_t lines = 0;

  std::size_t size() const { return elements * samples * lines; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Real-valued channel data tensor with its acquisition metadata.
class ChannelData {
 public:
  /// Zero-filled tensor shaped after `probe`.
  ChannelData(const ProbeConfig& probe, Alignment alignment);
  /// Takes ownership of `samples`; `shape` must equal the probe dimensions
  /// and the payload must be finite.
  ChannelData(const ProbeConfig& probe, Alignment alignment, Shape shape,
              std::vector<float> samples);

  const ProbeConfig& probe() const { return probe_; }
  Alignment alignment() const { return alignment_; }
  void set_alignment(Alignment a) { alignment_ = a; }

  Shape shape() const { return {num_elements(), num_samples(), num_lines()}; }
  std::size_t num_elements() const { return probe_.num_elements; }
  std::size_t num_samples() const { return probe_.num_samples; }
  std::size_t num_lines() const { return probe_.num_lines; }
  std::size_t size() const { return samples_.size(); }

  std::size_t index(std::size_t e, std::size_t t, std::size_t l) const {
    return (e * probe_.num_samples + t) * probe_.num_lines + l;
  }
  float operator()(std::size_t e, std::size_t t, std::size_t l) const {
    return samples_[index(e, t, l)];
  }
  float& operator()(std::size_t e, std::size_t t, std::size_t l) {
    return samples_[index(e, t, l)];
  }

  std::span<const float> samples() const { return samples_; }
  std::span<float> samples() { return samples_; }

  /// Contiguous T x L block of element e.
  std::span<const float> element_slice(std::size_t e) const;
  std::span<float> element_slice(std::size_t e);

  bool all_finite() const;

  friend bool operator==(const ChannelData&, const ChannelData&) = default;

 private:
  ProbeConfig probe_;
  Alignment alignment_;
  std::vector<float> samples_;
};

/// Dense row-major 2-D grid.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const T> values() const { return data_; }
  std::span<T> values() { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Image = Grid<float>;
using Mask = Grid<std::uint8_t>;

inline constexpr std::size_t kBModeSize = 1024;

/// 1024 x 1024 grayscale image with pixels in [0, 1].
class BModeImage {
 public:
  explicit BModeImage(double dynamic_range_db = 60.0);
  explicit BModeImage(Image pixels, double dynamic_range_db = 60.0);

  const Image& pixels() const { return pixels_; }
  double dynamic_range_db() const { return dynamic_range_db_; }

  friend bool operator==(const BModeImage&, const BModeImage&) = default;

 private:
  Image pixels_;
  double dynamic_range_db_;
};

/// Lesion and background regions on the image grid.
struct RegionMask {
  Mask lesion;
  Mask background;

  /// Throws InvalidArgument unless both masks share a shape and are disjoint.
  void validate() const;
};

/// Seed of a stochastic operation.
struct SeedSpec {
  std::uint64_t seed = 0;
  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Physical coordinates of B-mode pixel centres. Rows span depth samples
/// [0, T - 1] and columns span scan lines [0, L - 1], both with corners aligned.
struct PixelGeometry {
  explicit PixelGeometry(const ProbeConfig& probe, std::size_t rows = kBModeSize,
                         std::size_t cols = kBModeSize);

  double sample_of_row(std::size_t r) const;
  double line_of_col(std::size_t c) const;
  double depth(std::size_t r) const;
  double lateral(std::size_t c) const;

  ProbeConfig probe;
  std::size_t rows;
  std::size_t cols;
};

}  // namespace usbeam

#endif  // USBEAM_TYPES_HPP
