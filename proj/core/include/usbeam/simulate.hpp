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

#ifndef USBEAM_SIMULATE_HPP
#define USBEAM_SIMULATE_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "usbeam/types.hpp"

namespace usbeam {

enum class LesionKind { kAnechoic, kHypoechoic, kHyperechoic };

struct Ellipse {
  double center_x = 0.0;  // m
  double center_z = 0.0;  // m
  double radius_x = 0.0;  // m
  double radius_z = 0.0;  // m
  LesionKind kind = LesionKind::kAnechoic;
  double amplitude_scale = 0.0;

  /// True if (x, z) lies strictly inside the ellipse with radii scaled by `scale`.
  bool contains(double x, double z, double scale = 1.0) const;
};

struct Scatterer {
  double x = 0.0;  // lateral, m
  double z = 0.0;  // depth, m
  double amplitude = 1.0;

  friend bool operator==(const Scatterer&, const Scatterer&) = default;
};

struct Phantom {
  std::vector<Scatterer> scatterers;
  std::vector<Ellipse> lesions;

  /// Throws InvalidArgument if a scatterer leaves the imaged region, an
  /// anechoic lesion contains a scatterer or an amplitude scale is out of [0, 10].
  void validate(const ProbeConfig& probe) const;
};

/// Gaussian-modulated cosine excitation. Bandwidth is the -6 dB fractional
/// bandwidth of the spectrum.
struct PulseSpec {
  double center_freq = 7.6e6;
  double fractional_bandwidth = 0.67;

  /// Pulse value at time offset t (s) from its peak.
  double operator()(double t) const;
  /// Envelope decay rate a in exp(-a t^2).
  double envelope_rate() const;
  /// Half-length (s) beyond which the envelope is below -80 dB.
  double half_duration() const;
  void validate() const;

  static PulseSpec for_probe(const ProbeConfig& probe);
};

enum class PhantomPreset { kPointTarget, kAnechoicCyst, kHypoechoicLesion };

/// Parses "point", "cyst"/"anechoic" or "hypoechoic"; throws InvalidArgument.
PhantomPreset parse_preset(std::string_view name);
std::string_view preset_name(PhantomPreset preset);

inline constexpr std::size_t kDefaultScattererCount = 20000;

/// Point target: one unit scatterer at (0, max_depth / 2). Cyst presets: uniform
/// random scatterers over the aperture x [0, max_depth] with a circular lesion of
/// radius max_depth / 8 centred at (0, max_depth / 2); anechoic removes the
/// scatterers inside it, hypoechoic scales them by 0.25.
Phantom make_phantom(PhantomPreset preset, SeedSpec seed, const ProbeConfig& probe,
                     std::size_t num_scatterers = kDefaultScattererCount);

/// Raw RF channel data of a line-by-line focused acquisition. Line l transmits
/// from (x_l, 0) focused at (x_l, max_depth / 2); the transmit path length uses
/// the virtual-source model and the receive path is the straight distance to the
/// element. Single scattering, no attenuation.
ChannelData synthesize_rf(const Phantom& phantom, const ProbeConfig& probe, const PulseSpec& pulse);

/// Lesion mask: first lesion shrunk to 90 % of its radii. Background: the annulus
/// between 120 % and 170 % of the radii, clipped to the image.
RegionMask ground_truth_masks(const Phantom& phantom, const ProbeConfig& probe,
                              std::size_t rows = kBModeSize, std::size_t cols = kBModeSize);

}  // namespace usbeam

#endif  // USBEAM_SIMULATE_HPP
