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

#ifndef USBEAM_TOOLS_CONFIG_HPP
#define USBEAM_TOOLS_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "usbeam/augment.hpp"
#include "usbeam/beamform.hpp"
#include "usbeam/losses.hpp"
#include "usbeam/simulate.hpp"
#include "usbeam/ssim.hpp"

namespace usbeam::cli {

using Json = nlohmann::json;

/// Malformed or unknown configuration content.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Reads a JSON object key by key and rejects keys that were never read.
class ObjectReader {
 public:
  ObjectReader(const Json& json, std::string context);

  /// Stores json[key] into `out` if present; throws ConfigError on a type mismatch.
  template <typename T>
  void read(const char* key, T& out);

  /// Child object for `key`, or nullptr when absent.
  const Json* child(const char* key);

  bool has(const char* key) const;

  /// Marks `key` as handled by the caller.
  void consume(const char* key) { seen_.insert(key); }

  /// Throws ConfigError naming the first key that was not consumed.
  void finish() const;

  const std::string& context() const { return context_; }

 private:
  const Json& json_;
  std::string context_;
  std::set<std::string> seen_;
};

Json load_json(const std::filesystem::path& path);

ProbeConfig parse_probe(const Json& json, ProbeConfig base = {});
PulseSpec parse_pulse(const Json& json, PulseSpec base);
MvParams parse_mv(const Json& json);
SpeckleParams parse_speckle(const Json& json);
GaussianNoiseParams parse_gaussian(const Json& json);
SpecAugmentParams parse_spec_augment(const Json& json);
SubsampleParams parse_subsample(const Json& json);
DropoutParams parse_dropout(const Json& json);
PipelineConfig parse_pipeline(const Json& json);
MsSsimParams parse_ms_ssim(const Json& json);

/// Loss configuration: {"lambda", "gamma", "ms_ssim": {...}}.
struct LossConfig {
  LossParams loss;
  MsSsimParams ms_ssim;
};
LossConfig parse_loss_config(const Json& json);

/// Simulation configuration: {"probe": {...}, "pulse": {...}, "num_scatterers"}.
struct SimulateConfig {
  ProbeConfig probe;
  std::optional<PulseSpec> pulse;
  std::size_t num_scatterers = kDefaultScattererCount;
};
SimulateConfig parse_simulate_config(const Json& json, ProbeConfig base = {});

/// Beamforming configuration: {"mv": {...}, "dynamic_range_db"}.
struct BeamformConfig {
  MvParams mv;
  double dynamic_range_db = 60.0;
};
BeamformConfig parse_beamform_config(const Json& json);

/// Metrics configuration: {"bins"}.
struct MetricsConfig {
  std::size_t bins = 256;
};
MetricsConfig parse_metrics_config(const Json& json);

/// End-to-end configuration: {"simulate", "augment", "beamform", "metrics"}.
struct PipelineRunConfig {
  SimulateConfig simulate;
  std::optional<PipelineConfig> augment;
  BeamformConfig beamform;
  MetricsConfig metrics;
};
PipelineRunConfig parse_pipeline_run_config(const Json& json, ProbeConfig base = {});

/// JSON number, or "inf" / "-inf" / "nan" strings for non-finite values.
Json metric_value(double v);

}  // namespace usbeam::cli

#endif  // USBEAM_TOOLS_CONFIG_HPP
