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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <type_traits>

namespace usbeam::cli {

ObjectReader::ObjectReader(const Json& json, std::string context)
    : json_(json), context_(std::move(context)) {
  if (!json_.is_object()) throw ConfigError(context_ + ": expected a JSON object");
}

template <typename T>
void ObjectReader::read(const char* key, T& out) {
  seen_.insert(key);
  const auto it = json_.find(key);
  if (it == json_.end()) return;
  const std::string where = context_ + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) throw ConfigError(where + ": expected a boolean");
    out = it->template get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_unsigned()) throw ConfigError(where + ": expected a non-negative integer");
    out = it->template get<T>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) throw ConfigError(where + ": expected a number");
    out = it->template get<T>();
    if (!std::isfinite(out)) throw ConfigError(where + ": expected a finite number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!it->is_string()) throw ConfigError(where + ": expected a string");
    out = it->template get<std::string>();
  } else {
    static_assert(sizeof(T) == 0, "unsupported config field type");
  }
}

template void ObjectReader::read<bool>(const char*, bool&);
template void ObjectReader::read<std::size_t>(const char*, std::size_t&);
template void ObjectReader::read<double>(const char*, double&);
template void ObjectReader::read<std::string>(const char*, std::string&);

const Json* ObjectReader::child(const char* key) {
  seen_.insert(key);
  const auto it = json_.find(key);
  if (it == json_.end()) return nullptr;
  if (!it->is_object()) throw ConfigError(context_ + "." + key + ": expected a JSON object");
  return &*it;
}

bool ObjectReader::has(const char* key) const { return json_.contains(key); }

void ObjectReader::finish() const {
  for (const auto& [key, value] : json_.items()) {
    if (!seen_.count(key)) throw ConfigError(context_ + ": unknown key '" + key + "'");
  }
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

ProbeConfig parse_probe(const Json& json, ProbeConfig base) {
  ObjectReader r(json, "probe");
  r.read("num_elements", base.num_elements);
  r.read("element_pitch", base.element_pitch);
  r.read("center_freq", base.center_freq);
  r.read("sample_rate", base.sample_rate);
  r.read("sound_speed", base.sound_speed);
  r.read("num_samples", base.num_samples);
  r.read("num_lines", base.num_lines);
  r.finish();
  base.validate();
  return base;
}

PulseSpec parse_pulse(const Json& json, PulseSpec base) {
  ObjectReader r(json, "pulse");
  r.read("center_freq", base.center_freq);
  r.read("fractional_bandwidth", base.fractional_bandwidth);
  r.finish();
  base.validate();
  return base;
}

MvParams parse_mv(const Json& json) {
  ObjectReader r(json, "mv");
  MvParams p;
  if (r.has("subaperture_len")) {
    std::size_t len = 0;
    r.read("subaperture_len", len);
    p.subaperture_len = len;
  }
  r.read("diagonal_loading", p.diagonal_loading);
  r.read("temporal_averaging", p.temporal_averaging);
  r.finish();
  return p;
}

SpeckleParams parse_speckle(const Json& json) {
  ObjectReader r(json, "speckle");
  SpeckleParams p;
  r.read("noise_level", p.noise_level);
  r.read("num_noisy_channels", p.num_noisy_channels);
  r.read("abs_mode", p.abs_mode);
  r.consume("kernel");
  if (r.has("kernel")) {
    const Json& k = json.at("kernel");
    if (!k.is_array() || k.empty() || !k[0].is_array() || k[0].empty()) {
      throw ConfigError("speckle.kernel: expected a non-empty array of rows");
    }
    Grid<double> kernel(k.size(), k[0].size());
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (!k[i].is_array() || k[i].size() != kernel.cols()) {
        throw ConfigError("speckle.kernel: rows must have equal length");
      }
      for (std::size_t j = 0; j < kernel.cols(); ++j) {
        if (!k[i][j].is_number()) throw ConfigError("speckle.kernel: entries must be numbers");
        kernel(i, j) = k[i][j].get<double>();
      }
    }
    p.kernel = std::move(kernel);
  }
  r.finish();
  return p;
}

GaussianNoiseParams parse_gaussian(const Json& json) {
  ObjectReader r(json, "gaussian");
  GaussianNoiseParams p;
  r.read("additive_variance", p.additive_variance);
  r.read("multiplicative_mean", p.multiplicative_mean);
  r.read("multiplicative_variance", p.multiplicative_variance);
  r.finish();
  p.validate();
  return p;
}

SpecAugmentParams parse_spec_augment(const Json& json) {
  ObjectReader r(json, "spec_augment");
  SpecAugmentParams p;
  r.read("fft_size", p.fft_size);
  r.read("hop", p.hop);
  r.read("max_mask_time_frames", p.max_mask_time_frames);
  r.read("max_mask_freq_bins", p.max_mask_freq_bins);
  r.read("max_mask_lines", p.max_mask_lines);
  r.read("time_stretch_min", p.time_stretch_min);
  r.read("time_stretch_max", p.time_stretch_max);
  r.read("line_stretch_min", p.line_stretch_min);
  r.read("line_stretch_max", p.line_stretch_max);
  r.read("enable_stretch", p.enable_stretch);
  r.read("enable_mask", p.enable_mask);
  r.finish();
  p.validate();
  return p;
}

SubsampleParams parse_subsample(const Json& json) {
  ObjectReader r(json, "subsample");
  SubsampleParams p;
  r.read("time_factor", p.time_factor);
  r.read("line_factor", p.line_factor);
  r.read("keep_fraction_min", p.keep_fraction_min);
  r.read("keep_fraction_max", p.keep_fraction_max);
  r.finish();
  return p;
}

DropoutParams parse_dropout(const Json& json) {
  ObjectReader r(json, "dropout");
  DropoutParams p;
  r.read("num_patches", p.num_patches);
  r.read("patch_time", p.patch_time);
  r.read("patch_lines", p.patch_lines);
  r.consume("fixed_origin");
  if (r.has("fixed_origin")) {
    const Json& o = json.at("fixed_origin");
    if (!o.is_array() || o.size() != 2 || !o[0].is_number_unsigned() || !o[1].is_number_unsigned()) {
      throw ConfigError("dropout.fixed_origin: expected [t, l] non-negative integers");
    }
    p.fixed_origin = std::make_pair(o[0].get<std::size_t>(), o[1].get<std::size_t>());
  }
  r.finish();
  return p;
}

PipelineConfig parse_pipeline(const Json& json) {
  ObjectReader r(json, "augment");
  PipelineConfig c;
  r.read("speckle_prob", c.speckle_prob);
  r.read("gaussian_prob", c.gaussian_prob);
  r.read("specaugment_prob", c.specaugment_prob);
  r.read("subsample_prob", c.subsample_prob);
  r.read("dropout_prob", c.dropout_prob);
  r.read("seed", c.seed.seed);
  if (const Json* j = r.child("speckle")) c.speckle = parse_speckle(*j);
  if (const Json* j = r.child("gaussian")) c.gaussian = parse_gaussian(*j);
  if (const Json* j = r.child("spec_augment")) c.spec_augment = parse_spec_augment(*j);
  if (const Json* j = r.child("subsample")) c.subsample = parse_subsample(*j);
  if (const Json* j = r.child("dropout")) c.dropout = parse_dropout(*j);
  r.finish();
  c.validate();
  return c;
}

MsSsimParams parse_ms_ssim(const Json& json) {
  ObjectReader r(json, "ms_ssim");
  MsSsimParams p;
  r.read("k1", p.k1);
  r.read("k2", p.k2);
  r.read("dynamic_range", p.dynamic_range);
  r.read("window_size", p.window_size);
  r.read("window_sigma", p.window_sigma);
  r.read("num_scales", p.num_scales);
  r.read("luminance_weight", p.luminance_weight);
  r.consume("scale_weights");
  if (r.has("scale_weights")) {
    const Json& w = json.at("scale_weights");
    if (!w.is_array()) throw ConfigError("ms_ssim.scale_weights: expected an array of numbers");
    p.scale_weights.clear();
    for (const Json& v : w) {
      if (!v.is_number()) throw ConfigError("ms_ssim.scale_weights: expected an array of numbers");
      p.scale_weights.push_back(v.get<double>());
    }
  }
  r.finish();
  p.validate();
  return p;
}

LossConfig parse_loss_config(const Json& json) {
  ObjectReader r(json, "loss");
  LossConfig c;
  r.read("lambda", c.loss.lambda);
  r.read("gamma", c.loss.gamma);
  if (const Json* j = r.child("ms_ssim")) c.ms_ssim = parse_ms_ssim(*j);
  r.finish();
  c.loss.validate();
  return c;
}

SimulateConfig parse_simulate_config(const Json& json, ProbeConfig base) {
  ObjectReader r(json, "simulate");
  SimulateConfig c;
  c.probe = base;
  if (const Json* j = r.child("probe")) c.probe = parse_probe(*j, base);
  if (const Json* j = r.child("pulse")) c.pulse = parse_pulse(*j, PulseSpec::for_probe(c.probe));
  r.read("num_scatterers", c.num_scatterers);
  r.finish();
  if (c.num_scatterers == 0) throw ConfigError("simulate.num_scatterers: must be > 0");
  return c;
}

BeamformConfig parse_beamform_config(const Json& json) {
  ObjectReader r(json, "beamform");
  BeamformConfig c;
  if (const Json* j = r.child("mv")) c.mv = parse_mv(*j);
  r.read("dynamic_range_db", c.dynamic_range_db);
  r.finish();
  if (!(c.dynamic_range_db > 0.0)) throw ConfigError("beamform.dynamic_range_db: must be > 0");
  return c;
}

MetricsConfig parse_metrics_config(const Json& json) {
  ObjectReader r(json, "metrics");
  MetricsConfig c;
  r.read("bins", c.bins);
  r.finish();
  if (c.bins < 1) throw ConfigError("metrics.bins: must be >= 1");
  return c;
}

PipelineRunConfig parse_pipeline_run_config(const Json& json, ProbeConfig base) {
  ObjectReader r(json, "pipeline");
  PipelineRunConfig c;
  c.simulate.probe = base;
  if (const Json* j = r.child("simulate")) c.simulate = parse_simulate_config(*j, base);
  if (const Json* j = r.child("augment")) c.augment = parse_pipeline(*j);
  if (const Json* j = r.child("beamform")) c.beamform = parse_beamform_config(*j);
  if (const Json* j = r.child("metrics")) c.metrics = parse_metrics_config(*j);
  r.finish();
  return c;
}

Json metric_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace usbeam::cli
