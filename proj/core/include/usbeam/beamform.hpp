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

#ifndef USBEAM_BEAMFORM_HPP
#define USBEAM_BEAMFORM_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "usbeam/types.hpp"

namespace usbeam {

/// Beamsum before envelope detection, T x L (axial samples x scan lines).
using PreImage = Grid<double>;

/// Resamples each element trace onto the depth grid of its scan line. Output
/// sample t of element e on line l is the input interpolated linearly at
/// t' = fs (z + sqrt(z^2 + (x_e - x_l)^2)) / c with z = t c / (2 fs); t' beyond
/// T - 1 yields 0. Throws InvalidArgument if the input is already corrected.
ChannelData tof_correct(const ChannelData& raw);

/// Uniform apodization: mean over elements. Requires ToF-corrected input.
PreImage das(const ChannelData& cd);

struct MvParams {
  /// Unset means num_elements / 2.
  std::optional<std::size_t> subaperture_len;
  /// Loading factor; epsilon = diagonal_loading * trace(R0) / subaperture_len.
  double diagonal_loading = 0.01;
  /// Number of axial samples (centred window) averaged into R.
  std::size_t temporal_averaging = 1;

  std::size_t resolved_subaperture(std::size_t num_elements) const;
  void validate(std::size_t num_elements) const;
};

struct MvDiagnostics {
  /// Largest |1^T w - 1| over all pixels with nonzero covariance.
  double max_constraint_error = 0.0;
  /// Pixels whose covariance trace was zero (output 0).
  std::size_t zero_pixels = 0;
};

/// Capon weights w = R^-1 1 / (1^T R^-1 1) for a symmetric positive definite
/// matrix R stored row-major (n x n).
std::vector<double> capon_weights(std::span<const double> covariance, std::size_t n);

/// Minimum-variance beamformer with subaperture smoothing and diagonal loading.
/// Requires ToF-corrected input.
PreImage mv(const ChannelData& cd, const MvParams& params = {}, MvDiagnostics* diagnostics = nullptr);

enum class Apodization { kDas, kMv };

/// Parses "das" or "mv"; throws InvalidArgument.
Apodization parse_apodization(std::string_view name);
std::string_view apodization_name(Apodization a);

/// Envelope detection along the axial axis, log compression to
/// [-dynamic_range_db, 0] dB, affine map to [0, 1] and bilinear interpolation
/// onto the 1024 x 1024 grid. An all-zero pre-image gives an all-zero image.
BModeImage form_image(const PreImage& pre, double dynamic_range_db = 60.0);

/// Per-line envelope of the pre-image normalised to its global maximum.
PreImage envelope(const PreImage& pre);

/// Lateral -6 dB width (in scan lines, fractional) of the envelope peak at
/// row `row`, with linear interpolation of the crossings.
double lateral_width_6db(const PreImage& env, std::size_t row);

/// Lateral -6 dB width (in pixels) around the brightest pixel of an image whose
/// values are a dB scale affinely mapped to [0, 1].
double image_lateral_width_6db(const Image& img, double dynamic_range_db);

}  // namespace usbeam

#endif  // USBEAM_BEAMFORM_HPP
