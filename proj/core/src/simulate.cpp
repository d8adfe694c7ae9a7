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

#include "usbeam/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "usbeam/rng.hpp"

namespace usbeam {
namespace {

// Pulse table oversampling relative to the RF sampling rate.
constexpr double kPulseOversample = 64.0;

double lateral_half_aperture(const ProbeConfig& probe) {
  return 0.5 * static_cast<double>(probe.num_elements) * probe.element_pitch;
}

/// Samples of the pulse on a fine grid; evaluated by linear interpolation.
class PulseTable {
 public:
  PulseTable(const PulseSpec& pulse, double sample_rate)
      : half_(pulse.half_duration()), step_(1.0 / (sample_rate * kPulseOversample)) {
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * half_ / step_)) + 2;
    table_.resize(n);
    for (std::size_t i = 0; i < n; ++i) table_[i] = pulse(static_cast<double>(i) * step_ - half_);
  }

  double half_duration() const { return half_; }

  /// Pulse value at offset u (s) from the pulse peak.
  double operator()(double u) const {
    const double pos = (u + half_) / step_;
    if (pos < 0.0) return 0.0;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= table_.size()) return 0.0;
    const double frac = pos - static_cast<double>(i);
    return table_[i] + frac * (table_[i + 1] - table_[i]);
  }

 private:
  double half_;
  double step_;
  std::vector<double> table_;
};

}  // namespace

bool Ellipse::contains(double x, double z, double scale) const {
  const double dx = (x - center_x) / (radius_x * scale);
  const double dz = (z - center_z) / (radius_z * scale);
  return dx * dx + dz * dz < 1.0;
}

void Phantom::validate(const ProbeConfig& probe) const {
  const double half = lateral_half_aperture(probe);
  const double depth = probe.max_depth();
  for (const auto& s : scatterers) {
    if (!(std::isfinite(s.x) && std::isfinite(s.z) && std::isfinite(s.amplitude))) {
      throw InvalidArgument("Phantom: non-finite scatterer");
    }
    if (s.x < -half || s.x > half || s.z < 0.0 || s.z > depth) {
      throw InvalidArgument("Phantom: scatterer outside the imaged region");
    }
  }
  for (const auto& e : lesions) {
    if (!(e.radius_x > 0.0 && e.radius_z > 0.0)) throw InvalidArgument("Phantom: lesion radii must be > 0");
    if (e.amplitude_scale < 0.0 || e.amplitude_scale > 10.0) {
      throw InvalidArgument("Phantom: lesion amplitude_scale outside [0, 10]");
    }
    if (e.kind == LesionKind::kAnechoic) {
      for (const auto& s : scatterers) {
        if (e.contains(s.x, s.z)) throw InvalidArgument("Phantom: scatterer inside anechoic lesion");
      }
    }
  }
}

double PulseSpec::envelope_rate() const {
  // -6 dB two-sided bandwidth of the Gaussian spectrum equals bw * fc.
  const double ref = std::log(std::pow(10.0, -6.0 / 20.0));
  const double x = std::numbers::pi * center_freq * fractional_bandwidth;
  return -(x * x) / (4.0 * ref);
}

double PulseSpec::operator()(double t) const {
  return std::exp(-envelope_rate() * t * t) * std::cos(2.0 * std::numbers::pi * center_freq * t);
}

double PulseSpec::half_duration() const {
  return std::sqrt(std::log(1.0e4) / envelope_rate());
}

void PulseSpec::validate() const {
  if (!(center_freq > 0.0)) throw InvalidArgument("PulseSpec: center_freq must be > 0");
  if (!(fractional_bandwidth > 0.0 && fractional_bandwidth < 2.0)) {
    throw InvalidArgument("PulseSpec: fractional_bandwidth must lie in (0, 2)");
  }
}

PulseSpec PulseSpec::for_probe(const ProbeConfig& probe) {
  PulseSpec p;
  p.center_freq = probe.center_freq;
  return p;
}

PhantomPreset parse_preset(std::string_view name) {
  if (name == "point") return PhantomPreset::kPointTarget;
  if (name == "cyst" || name == "anechoic") return PhantomPreset::kAnechoicCyst;
  if (name == "hypoechoic") return PhantomPreset::kHypoechoicLesion;
  throw InvalidArgument("unknown phantom preset '" + std::string(name) +
                        "' (expected point, cyst or hypoechoic)");
}

std::string_view preset_name(PhantomPreset preset) {
  switch (preset) {
    case PhantomPreset::kPointTarget: return "point";
    case PhantomPreset::kAnechoicCyst: return "cyst";
    case PhantomPreset::kHypoechoicLesion: return "hypoechoic";
  }
  return "unknown";
}

Phantom make_phantom(PhantomPreset preset, SeedSpec seed, const ProbeConfig& probe,
                     std::size_t num_scatterers) {
  probe.validate();
  Phantom phantom;
  const double depth = probe.max_depth();
  if (preset == PhantomPreset::kPointTarget) {
    phantom.scatterers.push_back({0.0, 0.5 * depth, 1.0});
    return phantom;
  }

  Ellipse lesion;
  lesion.center_x = 0.0;
  lesion.center_z = 0.5 * depth;
  lesion.radius_x = lesion.radius_z = depth / 8.0;
  if (preset == PhantomPreset::kAnechoicCyst) {
    lesion.kind = LesionKind::kAnechoic;
    lesion.amplitude_scale = 0.0;
  } else {
    lesion.kind = LesionKind::kHypoechoic;
    lesion.amplitude_scale = 0.25;
  }
  phantom.lesions.push_back(lesion);

  const double half = lateral_half_aperture(probe);
  Engine engine = make_engine(derive_seed(seed, 0));
  phantom.scatterers.reserve(num_scatterers);
  while (phantom.scatterers.size() < num_scatterers) {
    Scatterer s;
    s.x = uniform_real(engine, -half, half);
    s.z = uniform_real(engine, 0.0, depth);
    if (lesion.contains(s.x, s.z)) {
      if (lesion.kind == LesionKind::kAnechoic) continue;
      s.amplitude = lesion.amplitude_scale;
    }
    phantom.scatterers.push_back(s);
  }
  return phantom;
}

ChannelData synthesize_rf(const Phantom& phantom, const ProbeConfig& probe, const PulseSpec& pulse) {
  if (phantom.scatterers.empty()) throw InvalidArgument("synthesize_rf: phantom has no scatterers");
  probe.validate();
  pulse.validate();
  phantom.validate(probe);

  ChannelData out(probe, Alignment::kRaw);
  const ProbeConfig& p = out.probe();
  const std::size_t E = p.num_elements;
  const std::size_t T = p.num_samples;
  const std::size_t L = p.num_lines;
  const double c = p.sound_speed;
  const double fs = p.sample_rate;
  const double focal_depth = 0.5 * p.max_depth();

  const PulseTable table(pulse, fs);
  const double half = table.half_duration();

  // Receive path lengths do not depend on the scan line.
  const std::size_t S = phantom.scatterers.size();
  std::vector<double> rx(S * E);
  for (std::size_t s = 0; s < S; ++s) {
    const auto& sc = phantom.scatterers[s];
    for (std::size_t e = 0; e < E; ++e) rx[s * E + e] = std::hypot(p.element_x(e) - sc.x, sc.z);
  }

  std::vector<double> trace(E * T);
  for (std::size_t l = 0; l < L; ++l) {
    std::fill(trace.begin(), trace.end(), 0.0);
    const double xl = p.line_x(static_cast<double>(l));
    for (std::size_t s = 0; s < S; ++s) {
      const auto& sc = phantom.scatterers[s];
      if (sc.amplitude == 0.0) continue;
      // Virtual source at the focal point.
      const double to_focus = std::hypot(sc.x - xl, sc.z - focal_depth);
      const double d_tx = sc.z >= focal_depth ? focal_depth + to_focus : focal_depth - to_focus;
      for (std::size_t e = 0; e < E; ++e) {
        const double tau = (d_tx + rx[s * E + e]) / c;
        const double first = std::ceil((tau - half) * fs);
        const double last = std::floor((tau + half) * fs);
        if (last < 0.0 || first > static_cast<double>(T - 1)) continue;
        const auto n0 = static_cast<std::size_t>(std::max(first, 0.0));
        const auto n1 = static_cast<std::size_t>(std::min(last, static_cast<double>(T - 1)));
        double* row = &trace[e * T];
        for (std::size_t n = n0; n <= n1; ++n) {
          row[n] += sc.amplitude * table(static_cast<double>(n) / fs - tau);
        }
      }
    }
    for (std::size_t e = 0; e < E; ++e) {
      for (std::size_t t = 0; t < T; ++t) out(e, t, l) = static_cast<float>(trace[e * T + t]);
    }
  }
  return out;
}

RegionMask ground_truth_masks(const Phantom& phantom, const ProbeConfig& probe, std::size_t rows,
                              std::size_t cols) {
  if (phantom.lesions.empty()) throw InvalidArgument("ground_truth_masks: phantom has no lesion");
  const Ellipse& lesion = phantom.lesions.front();
  const PixelGeometry geo(probe, rows, cols);

  const double x_min = geo.lateral(0);
  const double x_max = geo.lateral(cols - 1);
  const double z_min = geo.depth(0);
  const double z_max = geo.depth(rows - 1);
  if (lesion.center_x - lesion.radius_x < x_min || lesion.center_x + lesion.radius_x > x_max ||
      lesion.center_z - lesion.radius_z < z_min || lesion.center_z + lesion.radius_z > z_max) {
    throw InvalidArgument("ground_truth_masks: lesion extends outside the image grid");
  }

  RegionMask mask{Mask(rows, cols), Mask(rows, cols)};
  for (std::size_t r = 0; r < rows; ++r) {
    const double z = geo.depth(r);
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = geo.lateral(c);
      if (lesion.contains(x, z, 0.9)) {
        mask.lesion(r, c) = 1;
      } else if (!lesion.contains(x, z, 1.2) && lesion.contains(x, z, 1.7)) {
        mask.background(r, c) = 1;
      }
    }
  }
  return mask;
}

}  // namespace usbeam
