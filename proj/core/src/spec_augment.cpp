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

#include "usbeam/spec_augment.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "fft.hpp"
#include "usbeam/rng.hpp"

namespace usbeam {
namespace {

using Complex = std::complex<double>;

std::vector<double> periodic_hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

std::size_t stretched_size(std::size_t n, double factor) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(n) * factor)));
}

/// Source coordinate of output index j when resampling n_in points to n_out
/// points with aligned corners.
double source_coord(std::size_t j, std::size_t n_in, std::size_t n_out) {
  if (n_out <= 1 || n_in <= 1) return 0.0;
  return static_cast<double>(j) * static_cast<double>(n_in - 1) / static_cast<double>(n_out - 1);
}

void check_range(const MaskRange& r, std::size_t dim, const char* what) {
  if (r.start > dim || r.length > dim - r.start) {
    throw InvalidArgument(std::string("SpecAugmentPlan: ") + what + " mask out of range");
  }
}

/// Spectrogram of one element: [line][bin][frame].
class Spectrogram {
 public:
  Spectrogram(std::size_t lines, std::size_t bins, std::size_t frames)
      : lines_(lines), bins_(bins), frames_(frames), data_(lines * bins * frames) {}

  std::size_t lines() const { return lines_; }
  std::size_t bins() const { return bins_; }
  std::size_t frames() const { return frames_; }
  Complex& at(std::size_t l, std::size_t f, std::size_t tau) { return data_[(l * bins_ + f) * frames_ + tau]; }
  Complex at(std::size_t l, std::size_t f, std::size_t tau) const {
    return data_[(l * bins_ + f) * frames_ + tau];
  }

 private:
  std::size_t lines_, bins_, frames_;
  std::vector<Complex> data_;
};

Spectrogram stretch_time(const Spectrogram& s, std::size_t frames) {
  Spectrogram out(s.lines(), s.bins(), frames);
  for (std::size_t j = 0; j < frames; ++j) {
    const double src = source_coord(j, s.frames(), frames);
    const std::size_t i0 = std::min(static_cast<std::size_t>(src), s.frames() - 1);
    const std::size_t i1 = std::min(i0 + 1, s.frames() - 1);
    const double a = src - static_cast<double>(i0);
    for (std::size_t l = 0; l < s.lines(); ++l) {
      for (std::size_t f = 0; f < s.bins(); ++f) out.at(l, f, j) = s.at(l, f, i0) + a * (s.at(l, f, i1) - s.at(l, f, i0));
    }
  }
  return out;
}

Spectrogram stretch_lines(const Spectrogram& s, std::size_t lines) {
  Spectrogram out(lines, s.bins(), s.frames());
  for (std::size_t j = 0; j < lines; ++j) {
    const double src = source_coord(j, s.lines(), lines);
    const std::size_t i0 = std::min(static_cast<std::size_t>(src), s.lines() - 1);
    const std::size_t i1 = std::min(i0 + 1, s.lines() - 1);
    const double a = src - static_cast<double>(i0);
    for (std::size_t f = 0; f < s.bins(); ++f) {
      for (std::size_t tau = 0; tau < s.frames(); ++tau) {
        out.at(j, f, tau) = s.at(i0, f, tau) + a * (s.at(i1, f, tau) - s.at(i0, f, tau));
      }
    }
  }
  return out;
}

}  // namespace

void SpecAugmentParams::validate() const {
  if (fft_size < 2 || fft_size % 2 != 0) throw InvalidArgument("SpecAugmentParams: fft_size must be even and >= 2");
  if (hop < 1 || hop > fft_size) throw InvalidArgument("SpecAugmentParams: hop must lie in [1, fft_size]");
  // A periodic Hann window vanishes at index 0, so frames must overlap.
  if (hop == fft_size) throw InvalidArgument("SpecAugmentParams: hop must be smaller than fft_size");
  if (!(time_stretch_min > 0.0 && time_stretch_min <= time_stretch_max) ||
      !(line_stretch_min > 0.0 && line_stretch_min <= line_stretch_max)) {
    throw InvalidArgument("SpecAugmentParams: stretch ranges must satisfy 0 < min <= max");
  }
}

std::size_t SpecAugmentParams::num_frames(std::size_t num_samples) const {
  const std::size_t pad = fft_size - hop;
  return (num_samples - 1 + pad) / hop + 1;
}

SpecAugmentPlan identity_plan(const Shape& shape, const SpecAugmentParams& params) {
  SpecAugmentPlan plan;
  plan.stretched_frames = params.num_frames(shape.samples);
  plan.stretched_lines = shape.lines;
  return plan;
}

SpecAugmentPlan stretch_plan(const Shape& shape, const SpecAugmentParams& params, StretchAxis axis,
                             double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidArgument("stretch_plan: factor must be > 0");
  SpecAugmentPlan plan = identity_plan(shape, params);
  plan.stretch = axis;
  plan.factor = axis == StretchAxis::kNone ? 1.0 : factor;
  if (axis == StretchAxis::kTime) plan.stretched_frames = stretched_size(plan.stretched_frames, factor);
  if (axis == StretchAxis::kLines) plan.stretched_lines = stretched_size(shape.lines, factor);
  return plan;
}

SpecAugmentPlan draw_spec_augment_plan(const Shape& shape, const SpecAugmentParams& params,
                                       SeedSpec seed) {
  params.validate();
  Engine engine = make_engine(seed);
  SpecAugmentPlan plan = identity_plan(shape, params);
  if (params.enable_stretch) {
    if (uniform_index(engine, 0, 1) == 1) {
      plan = stretch_plan(shape, params, StretchAxis::kTime,
                          uniform_real(engine, params.time_stretch_min, params.time_stretch_max));
    } else {
      plan = stretch_plan(shape, params, StretchAxis::kLines,
                          uniform_real(engine, params.line_stretch_min, params.line_stretch_max));
    }
  }
  if (params.enable_mask) {
    auto draw = [&](std::size_t max_len, std::size_t dim) {
      MaskRange r;
      r.length = uniform_index(engine, 0, std::min(max_len, dim));
      r.start = uniform_index(engine, 0, dim - r.length);
      return r;
    };
    plan.time = draw(params.max_mask_time_frames, plan.stretched_frames);
    plan.freq = draw(params.max_mask_freq_bins, params.num_bins());
    plan.lines = draw(params.max_mask_lines, plan.stretched_lines);
  }
  return plan;
}

ChannelData apply_spec_augment(const ChannelData& cd, const SpecAugmentParams& params,
                               const SpecAugmentPlan& plan) {
  params.validate();
  const std::size_t E = cd.num_elements();
  const std::size_t T = cd.num_samples();
  const std::size_t L = cd.num_lines();
  const std::size_t n = params.fft_size;
  const std::size_t hop = params.hop;
  if (n > T) throw InvalidArgument("spec_augment: fft_size exceeds the number of time samples");

  const std::size_t bins = params.num_bins();
  const std::size_t frames = params.num_frames(T);
  const std::size_t out_frames = plan.stretch == StretchAxis::kTime ? plan.stretched_frames : frames;
  const std::size_t out_lines = plan.stretch == StretchAxis::kLines ? plan.stretched_lines : L;
  if (plan.stretched_frames != out_frames || plan.stretched_lines != out_lines || out_frames == 0 ||
      out_lines == 0) {
    throw InvalidArgument("SpecAugmentPlan: stretched dimensions inconsistent with the input shape");
  }
  check_range(plan.time, out_frames, "time");
  check_range(plan.freq, bins, "frequency");
  check_range(plan.lines, out_lines, "line");

  const auto pad = static_cast<std::ptrdiff_t>(n - hop);
  const auto frame_start = [&](std::size_t tau) { return static_cast<std::ptrdiff_t>(tau * hop) - pad; };
  const std::vector<double> window = periodic_hann(n);

  // Squared-window overlap sum of the synthesis frames, shared by every trace.
  std::vector<double> wsum(T, 0.0);
  for (std::size_t tau = 0; tau < out_frames; ++tau) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::ptrdiff_t t = frame_start(tau) + static_cast<std::ptrdiff_t>(i);
      if (t >= 0 && t < static_cast<std::ptrdiff_t>(T)) wsum[static_cast<std::size_t>(t)] += window[i] * window[i];
    }
  }
  double wmax = 0.0;
  for (double v : wsum) wmax = std::max(wmax, v);
  const double tiny = wmax * 1e-12;

  detail::RealFft fft(n);
  std::vector<double> frame(n);
  std::vector<Complex> spectrum(bins);
  std::vector<double> acc(T);

  ChannelData out(cd.probe(), cd.alignment());
  for (std::size_t e = 0; e < E; ++e) {
    Spectrogram spec(L, bins, frames);
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t tau = 0; tau < frames; ++tau) {
        const std::ptrdiff_t s = frame_start(tau);
        for (std::size_t i = 0; i < n; ++i) {
          const std::ptrdiff_t t = s + static_cast<std::ptrdiff_t>(i);
          frame[i] = (t >= 0 && t < static_cast<std::ptrdiff_t>(T)) ? window[i] * cd(e, static_cast<std::size_t>(t), l) : 0.0;
        }
        fft.forward(frame, spectrum);
        for (std::size_t f = 0; f < bins; ++f) spec.at(l, f, tau) = spectrum[f];
      }
    }

    if (plan.stretch == StretchAxis::kTime) spec = stretch_time(spec, out_frames);
    if (plan.stretch == StretchAxis::kLines) spec = stretch_lines(spec, out_lines);

    for (std::size_t l = 0; l < out_lines; ++l) {
      const bool line_masked = l >= plan.lines.start && l < plan.lines.start + plan.lines.length;
      for (std::size_t f = 0; f < bins; ++f) {
        const bool freq_masked = f >= plan.freq.start && f < plan.freq.start + plan.freq.length;
        for (std::size_t tau = 0; tau < out_frames; ++tau) {
          const bool time_masked = tau >= plan.time.start && tau < plan.time.start + plan.time.length;
          if (line_masked || freq_masked || time_masked) spec.at(l, f, tau) = 0.0;
        }
      }
    }

    // Least-squares overlap-add; lines beyond the stretched count stay zero.
    const std::size_t keep_lines = std::min(out_lines, L);
    for (std::size_t l = 0; l < keep_lines; ++l) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t tau = 0; tau < out_frames; ++tau) {
        const std::ptrdiff_t s = frame_start(tau);
        if (s >= static_cast<std::ptrdiff_t>(T)) break;
        for (std::size_t f = 0; f < bins; ++f) spectrum[f] = spec.at(l, f, tau);
        fft.backward(spectrum, frame);
        for (std::size_t i = 0; i < n; ++i) {
          const std::ptrdiff_t t = s + static_cast<std::ptrdiff_t>(i);
          if (t >= 0 && t < static_cast<std::ptrdiff_t>(T)) {
            acc[static_cast<std::size_t>(t)] += window[i] * frame[i] / static_cast<double>(n);
          }
        }
      }
      for (std::size_t t = 0; t < T; ++t) {
        out(e, t, l) = wsum[t] > tiny ? static_cast<float>(acc[t] / wsum[t]) : 0.0f;
      }
    }
  }
  return out;
}

ChannelData spec_augment(const ChannelData& cd, const SpecAugmentParams& params, SeedSpec seed) {
  params.validate();
  if (params.fft_size > cd.num_samples()) {
    throw InvalidArgument("spec_augment: fft_size exceeds the number of time samples");
  }
  return apply_spec_augment(cd, params, draw_spec_augment_plan(cd.shape(), params, seed));
}

}  // namespace usbeam
