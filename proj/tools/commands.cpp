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

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "usbeam/contrast.hpp"
#include "usbeam/io.hpp"
#include "usbeam/rng.hpp"

namespace usbeam::cli {
namespace {

namespace fs = std::filesystem;

/// Writes through a sibling temporary file so `path` only appears complete.
void write_atomic(const fs::path& path, const std::function<void(const fs::path&)>& write) {
  fs::path tmp = path;
  tmp += ".partial";
  try {
    write(tmp);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  write_atomic(path, [&](const fs::path& tmp) {
    std::ofstream f(tmp, std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("failed writing " + tmp.string());
  });
}

void save_channel_data(const ChannelData& cd, const fs::path& path) {
  write_atomic(path, [&](const fs::path& tmp) { write_channel_data(cd, tmp); });
}

void save_image(const BModeImage& img, const fs::path& path) {
  write_atomic(path, [&](const fs::path& tmp) { write_image(img, tmp); });
}

void save_mask(const Mask& mask, const fs::path& path) {
  write_atomic(path, [&](const fs::path& tmp) { write_mask(mask, tmp); });
}

void require_file(const fs::path& path, const char* what) {
  if (!fs::exists(path)) throw IoError(std::string(what) + " not found: " + path.string());
}

ProbeConfig grid_probe(const std::string& grid) {
  return grid == "reduced" ? ProbeConfig::reduced() : ProbeConfig{};
}

std::string mm(double meters) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << meters * 1e3 << " mm";
  return s.str();
}

std::string_view lesion_kind_name(LesionKind k) {
  switch (k) {
    case LesionKind::kAnechoic: return "anechoic";
    case LesionKind::kHypoechoic: return "hypoechoic";
    case LesionKind::kHyperechoic: return "hyperechoic";
  }
  return "unknown";
}

void print_phantom(const Phantom& ph, PhantomPreset preset, std::ostream& out) {
  out << "phantom: preset=" << preset_name(preset) << " scatterers=" << ph.scatterers.size() << "\n";
  for (const Ellipse& e : ph.lesions) {
    out << "lesion: kind=" << lesion_kind_name(e.kind) << " center=(" << mm(e.center_x) << ", "
        << mm(e.center_z) << ") radius=(" << mm(e.radius_x) << ", " << mm(e.radius_z)
        << ") amplitude_scale=" << e.amplitude_scale << "\n";
  }
}

std::string shape_string(const ChannelData& cd) {
  return std::to_string(cd.num_elements()) + "x" + std::to_string(cd.num_samples()) + "x" +
         std::to_string(cd.num_lines());
}

BModeImage beamform_image(const ChannelData& tof, Apodization method, const BeamformConfig& cfg) {
  const PreImage pre = method == Apodization::kDas ? das(tof) : mv(tof, cfg.mv);
  return form_image(pre, cfg.dynamic_range_db);
}

Json contrast_record(const std::string& frame_id, const std::string& method, const ContrastReport& r) {
  Json j;
  j["frame_id"] = frame_id;
  j["method"] = method;
  j["cnr_db"] = metric_value(r.cnr_db);
  j["gcnr"] = metric_value(r.gcnr);
  j["cr_db"] = metric_value(r.cr_db);
  j["lesion_pixel_count"] = r.lesion_pixel_count;
  j["background_pixel_count"] = r.background_pixel_count;
  return j;
}

std::vector<double> json_logits(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) return {};
  if (!it->is_array()) throw ConfigError(std::string("logits.") + key + ": expected an array of numbers");
  std::vector<double> v;
  for (const Json& x : *it) {
    if (!x.is_number()) throw ConfigError(std::string("logits.") + key + ": expected an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string preset;
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
  std::string grid = "full";
  std::string lesion_mask;
  std::string background_mask;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const PhantomPreset preset = parse_preset(a.preset);
  SimulateConfig cfg;
  cfg.probe = grid_probe(a.grid);
  if (!a.config.empty()) cfg = parse_simulate_config(load_json(a.config), grid_probe(a.grid));
  const Phantom ph = make_phantom(preset, SeedSpec{a.seed}, cfg.probe, cfg.num_scatterers);
  const PulseSpec pulse = cfg.pulse.value_or(PulseSpec::for_probe(cfg.probe));
  const ChannelData raw = synthesize_rf(ph, cfg.probe, pulse);
  print_phantom(ph, preset, out);

  if (!a.lesion_mask.empty() || !a.background_mask.empty()) {
    const RegionMask masks = ground_truth_masks(ph, cfg.probe);
    if (!a.lesion_mask.empty()) save_mask(masks.lesion, a.lesion_mask);
    if (!a.background_mask.empty()) save_mask(masks.background, a.background_mask);
  }
  save_channel_data(raw, a.out);
  out << "wrote " << a.out << " (" << shape_string(raw) << ", raw)\n";
  return kExitOk;
}

struct BeamformArgs {
  std::string in;
  std::string out;
  std::string method = "das";
  std::optional<double> dynamic_range;
  std::string config;
  bool save_tof = false;
  bool tof = false;
};

fs::path tof_path_for(const fs::path& out) {
  fs::path p = out;
  p.replace_extension(".tof.uscd");
  return p;
}

int cmd_beamform(const BeamformArgs& a, std::ostream& out) {
  const Apodization method = parse_apodization(a.method);
  BeamformConfig cfg;
  if (!a.config.empty()) cfg = parse_beamform_config(load_json(a.config));
  if (a.dynamic_range) cfg.dynamic_range_db = *a.dynamic_range;
  if (!(cfg.dynamic_range_db > 0.0)) throw InvalidArgument("--dynamic-range must be > 0");

  require_file(a.in, "input");
  ChannelData cd = read_channel_data(a.in);
  if (cd.alignment() == Alignment::kTofCorrected) {
    if (a.tof) throw InvalidArgument("input is already ToF-corrected; drop --tof");
  } else {
    cd = tof_correct(cd);
    if (a.save_tof) {
      const fs::path tof = tof_path_for(a.out);
      save_channel_data(cd, tof);
      out << "wrote " << tof.string() << " (" << shape_string(cd) << ", tof-corrected)\n";
    }
  }
  const BModeImage img = beamform_image(cd, method, cfg);
  save_image(img, a.out);
  out << "wrote " << a.out << " (" << apodization_name(method) << ", " << cfg.dynamic_range_db
      << " dB)\n";
  return kExitOk;
}

struct AugmentArgs {
  std::string in;
  std::string out;
  std::string config;
  std::optional<std::uint64_t> seed;
};

std::string fired_list(const std::vector<Stage>& fired) {
  if (fired.empty()) return "none";
  std::string s;
  for (Stage st : fired) {
    if (!s.empty()) s += ", ";
    s += stage_name(st);
  }
  return s;
}

int cmd_augment(const AugmentArgs& a, std::ostream& out) {
  PipelineConfig cfg;
  if (!a.config.empty()) cfg = parse_pipeline(load_json(a.config));
  if (a.seed) cfg.seed = SeedSpec{*a.seed};
  require_file(a.in, "input");
  const ChannelData cd = read_channel_data(a.in);
  std::vector<Stage> fired;
  const ChannelData aug = augment_pipeline(cd, cfg, &fired);
  save_channel_data(aug, a.out);
  out << "stages fired: " << fired_list(fired) << "\n";
  out << "wrote " << a.out << " (" << shape_string(aug) << ")\n";
  return kExitOk;
}

struct MetricsArgs {
  std::vector<std::string> images;
  std::string reference;
  std::string lesion_mask;
  std::string background_mask;
  bool no_match = false;
  std::string method = "unknown";
  std::string out;
  std::string config;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
  MetricsConfig cfg;
  if (!a.config.empty()) cfg = parse_metrics_config(load_json(a.config));
  if (!a.no_match && a.reference.empty()) throw InvalidArgument("--reference is required unless --no-match");
  require_file(a.lesion_mask, "lesion mask");
  require_file(a.background_mask, "background mask");
  RegionMask masks{read_mask(a.lesion_mask), read_mask(a.background_mask)};
  masks.validate();

  std::optional<Image> reference;
  if (!a.no_match) {
    require_file(a.reference, "reference image");
    reference = read_image(a.reference);
  }
  std::string report;
  for (const std::string& path : a.images) {
    require_file(path, "image");
    Image img = read_image(path);
    if (img.rows() != masks.lesion.rows() || img.cols() != masks.lesion.cols()) {
      throw InvalidArgument("image " + path + " and masks differ in size");
    }
    if (reference) {
      if (reference->rows() != img.rows() || reference->cols() != img.cols()) {
        throw InvalidArgument("image " + path + " and reference differ in size");
      }
      img = histogram_match(img, *reference, cfg.bins);
    }
    const ContrastReport r = contrast_metrics(img, masks, cfg.bins);
    report += contrast_record(fs::path(path).stem().string(), a.method, r).dump() + "\n";
  }
  if (a.out.empty()) {
    out << report;
  } else {
    write_text(a.out, report);
    out << "wrote " << a.out << " (" << a.images.size() << " records)\n";
  }
  return kExitOk;
}

struct LossArgs {
  std::string prediction;
  std::string target;
  std::string logits;
  std::string config;
  std::string out;
};

int cmd_loss(const LossArgs& a, std::ostream& out) {
  LossConfig cfg;
  if (!a.config.empty()) cfg = parse_loss_config(load_json(a.config));
  require_file(a.prediction, "prediction image");
  require_file(a.target, "target image");
  const Image yhat = read_image(a.prediction);
  const Image y = read_image(a.target);

  Json j;
  const double err = mse(yhat, y);
  const double ssim = ms_ssim(yhat, y, cfg.ms_ssim);
  j["mse"] = err;
  j["ms_ssim"] = ssim;
  j["ms_ssim_loss"] = ms_ssim_loss(yhat, y, cfg.ms_ssim);
  j["ubb_loss"] = ubb_loss(yhat, y, cfg.loss, cfg.ms_ssim);
  j["lambda"] = cfg.loss.lambda;
  j["gamma"] = cfg.loss.gamma;

  if (!a.logits.empty()) {
    const Json lj = load_json(a.logits);
    ObjectReader r(lj, "logits");
    r.consume("logits_prediction");
    r.consume("logits_target");
    r.consume("logits_head");
    std::size_t label = 0;
    if (!r.has("label")) throw ConfigError("logits: missing 'label'");
    r.read("label", label);
    r.finish();
    const std::vector<double> lp = json_logits(lj, "logits_prediction");
    const std::vector<double> lt = json_logits(lj, "logits_target");
    std::vector<double> head = json_logits(lj, "logits_head");
    if (lp.empty() || lt.empty()) throw ConfigError("logits: need logits_prediction and logits_target");
    if (lp.size() != lt.size()) {
      throw ConfigError("logits: class-count mismatch (" + std::to_string(lp.size()) + " vs " +
                        std::to_string(lt.size()) + ")");
    }
    if (head.empty()) head = lp;
    if (head.size() != lp.size()) throw ConfigError("logits: logits_head class count differs");
    j["label"] = label;
    j["feedback_loss"] = feedback_loss(lp, lt, label);
    j["jbc_loss"] = jbc_loss(yhat, y, lp, lt, label, cfg.loss, cfg.ms_ssim);
    j["cdcb_loss"] = cdcb_loss(yhat, y, head, label, cfg.loss, cfg.ms_ssim);
  }
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    write_text(a.out, text);
    out << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

struct PipelineArgs {
  std::string preset = "cyst";
  std::uint64_t seed = 0;
  std::string config;
  std::string out_dir;
  std::string grid = "full";
  std::string method = "both";
  bool no_augment = false;
};

int cmd_pipeline(const PipelineArgs& a, std::ostream& out) {
  const PhantomPreset preset = parse_preset(a.preset);
  PipelineRunConfig cfg;
  cfg.simulate.probe = grid_probe(a.grid);
  if (!a.config.empty()) cfg = parse_pipeline_run_config(load_json(a.config), grid_probe(a.grid));
  if (preset == PhantomPreset::kPointTarget) throw InvalidArgument("pipeline needs a lesion preset");

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const SeedSpec seed{a.seed};

  // simulate
  const Phantom ph = make_phantom(preset, derive_seed(seed, 0), cfg.simulate.probe, cfg.simulate.num_scatterers);
  const PulseSpec pulse = cfg.simulate.pulse.value_or(PulseSpec::for_probe(cfg.simulate.probe));
  const ChannelData raw = synthesize_rf(ph, cfg.simulate.probe, pulse);
  print_phantom(ph, preset, out);
  save_channel_data(raw, dir / "raw.uscd");
  const RegionMask masks = ground_truth_masks(ph, cfg.simulate.probe);
  save_mask(masks.lesion, dir / "lesion_mask.png");
  save_mask(masks.background, dir / "background_mask.png");

  // augment
  ChannelData input = raw;
  if (!a.no_augment) {
    PipelineConfig aug = cfg.augment.value_or(PipelineConfig{});
    aug.seed = derive_seed(seed, 1);
    std::vector<Stage> fired;
    input = augment_pipeline(raw, aug, &fired);
    save_channel_data(input, dir / "augmented.uscd");
    out << "stages fired: " << fired_list(fired) << "\n";
  }

  // beamform
  const ChannelData tof = tof_correct(input);
  std::vector<Apodization> methods;
  if (a.method == "both" || a.method == "das") methods.push_back(Apodization::kDas);
  if (a.method == "both" || a.method == "mv") methods.push_back(Apodization::kMv);
  std::vector<std::pair<Apodization, BModeImage>> images;
  for (Apodization m : methods) {
    images.emplace_back(m, beamform_image(tof, m, cfg.beamform));
    const fs::path png = dir / (std::string(apodization_name(m)) + ".png");
    save_image(images.back().second, png);
    out << "wrote " << png.string() << "\n";
  }

  // metrics, histogram-matched to the DAS image when there is one
  const Image& reference = images.front().second.pixels();
  std::string report;
  for (const auto& [m, img] : images) {
    const Image matched = histogram_match(img.pixels(), reference, cfg.metrics.bins);
    const ContrastReport r = contrast_metrics(matched, masks, cfg.metrics.bins);
    report += contrast_record(std::string(apodization_name(m)), std::string(apodization_name(m)), r).dump() + "\n";
  }
  write_text(dir / "metrics.jsonl", report);
  out << report;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"usbeam: ultrasound channel-data simulation, augmentation, beamforming and metrics"};
  app.name("usbeam");
  app.require_subcommand(1);
  const auto presets = CLI::IsMember({"point", "cyst", "anechoic", "hypoechoic"});
  const auto grids = CLI::IsMember({"full", "reduced"});

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Synthesize raw RF channel data from a phantom preset");
  s->add_option("--preset", sim.preset, "point, cyst (anechoic) or hypoechoic")->required()->check(presets);
  s->add_option("--seed", sim.seed, "Phantom seed");
  s->add_option("--out", sim.out, "Output USCD file")->required();
  s->add_option("--config", sim.config, "JSON with probe, pulse and num_scatterers");
  s->add_option("--grid", sim.grid, "Acquisition grid: full (128x1579x128) or reduced (64x1024x64)")->check(grids);
  s->add_option("--lesion-mask", sim.lesion_mask, "Write the ground-truth lesion mask PNG");
  s->add_option("--background-mask", sim.background_mask, "Write the ground-truth background mask PNG");

  BeamformArgs bf;
  auto* b = app.add_subcommand("beamform", "ToF-correct, apodize and form a 1024x1024 B-mode PNG");
  b->add_option("--in", bf.in, "Input USCD file")->required();
  b->add_option("--out", bf.out, "Output PNG")->required();
  b->add_option("--method", bf.method, "das or mv")->check(CLI::IsMember({"das", "mv"}));
  b->add_option("--dynamic-range", bf.dynamic_range, "Display dynamic range in dB (default 60)");
  b->add_option("--config", bf.config, "JSON with mv parameters and dynamic_range_db");
  b->add_flag("--save-tof", bf.save_tof, "Also write the ToF-corrected tensor next to --out");
  b->add_flag("--tof", bf.tof, "Require ToF correction (fails on corrected input)");

  AugmentArgs ag;
  auto* g = app.add_subcommand("augment", "Apply the augmentation pipeline to channel data");
  g->add_option("--in", ag.in, "Input USCD file")->required();
  g->add_option("--out", ag.out, "Output USCD file")->required();
  g->add_option("--config", ag.config, "Augmentation JSON config");
  g->add_option("--seed", ag.seed, "Overrides the config seed");

  MetricsArgs mt;
  auto* m = app.add_subcommand("metrics", "Contrast metrics (CNR, gCNR, CR) as JSON lines");
  m->add_option("--image", mt.images, "Image PNG (repeatable)")->required();
  m->add_option("--reference", mt.reference, "Reference PNG for histogram matching");
  m->add_option("--lesion-mask", mt.lesion_mask, "Lesion mask PNG")->required();
  m->add_option("--background-mask", mt.background_mask, "Background mask PNG")->required();
  m->add_flag("--no-match", mt.no_match, "Skip histogram matching");
  m->add_option("--method", mt.method, "Method label stored in each record");
  m->add_option("--out", mt.out, "Output JSON-lines file (default stdout)");
  m->add_option("--config", mt.config, "JSON with the histogram bin count");

  LossArgs ls;
  auto* l = app.add_subcommand("loss", "Image and classifier-feedback losses as JSON");
  l->add_option("--prediction", ls.prediction, "Predicted image PNG")->required();
  l->add_option("--target", ls.target, "Target image PNG")->required();
  l->add_option("--logits", ls.logits, "JSON with logits_prediction, logits_target, label");
  l->add_option("--config", ls.config, "JSON with lambda, gamma and ms_ssim parameters");
  l->add_option("--out", ls.out, "Output JSON file (default stdout)");

  PipelineArgs pl;
  auto* p = app.add_subcommand("pipeline", "simulate -> augment -> beamform -> metrics");
  p->add_option("--preset", pl.preset, "cyst (anechoic) or hypoechoic")->check(presets);
  p->add_option("--seed", pl.seed, "Run seed");
  p->add_option("--config", pl.config, "JSON with simulate, augment, beamform and metrics blocks");
  p->add_option("--out-dir", pl.out_dir, "Output directory")->required();
  p->add_option("--grid", pl.grid, "full or reduced")->check(grids);
  p->add_option("--method", pl.method, "das, mv or both")->check(CLI::IsMember({"das", "mv", "both"}));
  p->add_flag("--no-augment", pl.no_augment, "Beamform the simulated data directly");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_simulate(sim, out);
    if (b->parsed()) return cmd_beamform(bf, out);
    if (g->parsed()) return cmd_augment(ag, out);
    if (m->parsed()) return cmd_metrics(mt, out);
    if (l->parsed()) return cmd_loss(ls, out);
    if (p->parsed()) return cmd_pipeline(pl, out);
  } catch (const std::exception& e) {
    err << "usbeam: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace usbeam::cli
