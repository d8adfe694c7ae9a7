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

#ifndef USBEAM_AUGMENT_HPP
#define USBEAM_AUGMENT_HPP

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "usbeam/spec_augment.hpp"
#include "usbeam/types.hpp"

namespace usbeam {

/// 5 x 3 speckle weighting kernel; rows run along time, columns along lines.
Grid<double> default_speckle_kernel();

struct SpeckleParams {
  double noise_level = 4.5;  // sigma^2
  std::size_t num_noisy_channels = 25;
  Grid<double> kernel = default_speckle_kernel();
  /// Use |X| instead of sqrt(|X|) in the cross term.
  bool abs_mode = false;

  std::size_t num_phasors() const { return kernel.size() - 1; }
  void validate(std::size_t num_elements) const;
};

/// Elements {0, S, 2S, ..., (C - 1) S} with S = floor(E / C).
std::vector<std::size_t> speckle_channels(std::size_t num_elements, std::size_t num_noisy);

/// Adds speckle noise to the strided element slices. Each selected slice X gets
/// X + 2 sgn(X) sqrt(|X|) U + U^2 + V^2 where U, V are N(0, sigma^2) fields
/// correlated with the kernel (zero padding, same-size output). Other slices
/// are copied unchanged.
ChannelData speckle_noise(const ChannelData& cd, const SpeckleParams& params, SeedSpec seed);

enum class GaussianNoiseKind { kAdditive, kMultiplicative };

struct GaussianNoiseParams {
  double additive_variance = 50.0;
  double multiplicative_mean = 1.0;
  double multiplicative_variance = 0.8;

  void validate() const;
};

/// Chooses additive or multiplicative noise with equal probability.
ChannelData gaussian_noise(const ChannelData& cd, SeedSpec seed, const GaussianNoiseParams& params = {},
                           GaussianNoiseKind* chosen = nullptr);

/// Applies the given branch: X + Z with Z ~ N(0, additive_variance), or X * Z
/// with Z ~ N(multiplicative_mean, multiplicative_variance).
ChannelData gaussian_noise(const ChannelData& cd, GaussianNoiseKind kind, SeedSpec seed,
                           const GaussianNoiseParams& params = {});

struct SubsampleParams {
  std::size_t time_factor = 2;
  std::size_t line_factor = 2;
  double keep_fraction_min = 0.25;
  double keep_fraction_max = 0.5;

  void validate(std::size_t num_elements) const;
  /// Inclusive range of kept element counts for E elements.
  std::pair<std::size_t, std::size_t> keep_count_range(std::size_t num_elements) const;
};

/// Zero-stuffing subsampling: zeroes samples with t % time_factor != 0, lines
/// with l % line_factor != 0 and all but k randomly chosen elements.
ChannelData subsample_mask(const ChannelData& cd, const SubsampleParams& params, SeedSpec seed,
                           std::vector<std::size_t>* kept = nullptr);

struct DropoutParams {
  std::size_t num_patches = 5;
  std::size_t patch_time = 64;
  std::size_t patch_lines = 16;
  /// Places every patch at this (t, l) corner instead of drawing it.
  std::optional<std::pair<std::size_t, std::size_t>> fixed_origin;

  void validate(std::size_t num_samples, std::size_t num_lines) const;
};

/// Zeroes num_patches patch_time x patch_lines rectangles across all elements.
ChannelData coarse_dropout(const ChannelData& cd, const DropoutParams& params, SeedSpec seed);

enum class Stage { kSpeckle, kGaussian, kSpecAugment, kSubsample, kDropout };

std::string_view stage_name(Stage stage);

struct PipelineConfig {
  double speckle_prob = 0.5;
  double gaussian_prob = 1.0 / 3.0;
  double specaugment_prob = 1.0 / 3.0;
  double subsample_prob = 1.0 / 3.0;
  double dropout_prob = 1.0 / 3.0;
  SeedSpec seed;

  SpeckleParams speckle;
  GaussianNoiseParams gaussian;
  SpecAugmentParams spec_augment;
  SubsampleParams subsample;
  DropoutParams dropout;

  void validate() const;
};

/// Applies speckle, gaussian, spec_augment, subsample and dropout in that
/// order, each with its own probability and sub-seed. Stages that ran are
/// appended to `fired`.
ChannelData augment_pipeline(const ChannelData& cd, const PipelineConfig& cfg,
                             std::vector<Stage>* fired = nullptr);

}  // namespace usbeam

#endif  // USBEAM_AUGMENT_HPP
