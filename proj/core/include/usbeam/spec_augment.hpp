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

#ifndef USBEAM_SPEC_AUGMENT_HPP
#define USBEAM_SPEC_AUGMENT_HPP

#include <cstddef>

#include "usbeam/types.hpp"

namespace usbeam {

/// Time-frequency augmentation of channel data. Every (element, line) trace is
/// analysed with a Hann-windowed STFT along time, the spectrogram tensor
/// [e, l, f, tau] is stretched and masked, and the result is inverted with the
/// least-squares overlap-add estimator.
///
/// Frames start at tau * hop - (fft_size - hop), so every sample of the trace
/// lies under fft_size / hop frames and the window overlap sum is nonzero.
struct SpecAugmentParams {
  std::size_t fft_size = 256;
  std::size_t hop = 64;
  std::size_t max_mask_time_frames = 20;
  std::size_t max_mask_freq_bins = 16;
  std::size_t max_mask_lines = 16;
  double time_stretch_min = 0.9;
  double time_stretch_max = 1.2;
  double line_stretch_min = 0.95;
  double line_stretch_max = 1.1;
  bool enable_stretch = true;
  bool enable_mask = true;

  /// Throws InvalidArgument unless hop < fft_size, fft_size is even and the
  /// stretch ranges are positive and ordered.
  void validate() const;

  std::size_t num_bins() const { return fft_size / 2 + 1; }
  /// Number of STFT frames of a trace of `num_samples` samples.
  std::size_t num_frames(std::size_t num_samples) const;
};

enum class StretchAxis { kNone, kTime, kLines };

/// Half-open index range [start, start + length).
struct MaskRange {
  std::size_t start = 0;
  std::size_t length = 0;

  friend bool operator==(const MaskRange&, const MaskRange&) = default;
};

/// The random choices of one SpecAugment call. Mask ranges index the
/// spectrogram after stretching.
struct SpecAugmentPlan {
  StretchAxis stretch = StretchAxis::kNone;
  double factor = 1.0;
  std::size_t stretched_frames = 0;
  std::size_t stretched_lines = 0;
  MaskRange time;
  MaskRange freq;
  MaskRange lines;

  friend bool operator==(const SpecAugmentPlan&, const SpecAugmentPlan&) = default;
};

/// Draws the stretch and masks for data of shape `shape`.
SpecAugmentPlan draw_spec_augment_plan(const Shape& shape, const SpecAugmentParams& params,
                                       SeedSpec seed);

/// Identity plan (no stretch, empty masks) for data of shape `shape`.
SpecAugmentPlan identity_plan(const Shape& shape, const SpecAugmentParams& params);

/// Plan stretching axis `axis` by `factor` with empty masks.
SpecAugmentPlan stretch_plan(const Shape& shape, const SpecAugmentParams& params, StretchAxis axis,
                             double factor);

/// Applies a fixed plan. Output shape and metadata equal the input's.
ChannelData apply_spec_augment(const ChannelData& cd, const SpecAugmentParams& params,
                               const SpecAugmentPlan& plan);

/// Throws InvalidArgument if fft_size exceeds the number of samples.
ChannelData spec_augment(const ChannelData& cd, const SpecAugmentParams& params, SeedSpec seed);

}  // namespace usbeam

#endif  // USBEAM_SPEC_AUGMENT_HPP
