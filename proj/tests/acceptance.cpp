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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "test_support.hpp"
#include "usbeam/augment.hpp"
#include "usbeam/beamform.hpp"
#include "usbeam/contrast.hpp"
#include "usbeam/io.hpp"
#include "usbeam/losses.hpp"
#include "usbeam/simulate.hpp"
#include "usbeam/ssim.hpp"

namespace usbeam::acceptance {
namespace {

/// Collects the checks of one criterion; the criterion passes iff every check does.
class Report {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) failed_ = true;
    notes_.push_back((ok ? "" : "!") + what);
  }
  template <typename T>
  static std::string fmt(T v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
  }
  /// Runs `fn` and charges its wall time to the criterion budget; fixture
  /// construction outside timed sections is not charged.
  template <typename Fn>
  auto timed(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    struct Charge {
      Report* r;
      std::chrono::steady_clock::time_point t0;
      ~Charge() { r->charged_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
    } charge{this, t0};
    any_timed_ = true;
    return fn();
  }
  std::optional<double> charged_seconds() const { return any_timed_ ? std::optional(charged_) : std::nullopt; }
  bool passed() const { return !failed_; }
  std::string summary() const {
    std::string s;
    for (const auto& n : notes_) s += (s.empty() ? "" : "; ") + n;
    return s;
  }

 private:
  bool failed_ = false;
  bool any_timed_ = false;
  double charged_ = 0.0;
  std::vector<std::string> notes_;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<void(Report&)> body;
};

ChannelData full_random(std::uint64_t seed) {
  return test::random_channel_data(ProbeConfig{}, Alignment::kTofCorrected, seed);
}

double relative_rms(const Grid<double>& a, const Grid<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a.values()[i] - b.values()[i]) * (a.values()[i] - b.values()[i]);
    den += b.values()[i] * b.values()[i];
  }
  return std::sqrt(num / den);
}

std::pair<std::size_t, std::size_t> argmax_abs(const Grid<double>& g) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (std::abs(g.values()[i]) > std::abs(g.values()[best])) best = i;
  }
  return {best / g.cols(), best % g.cols()};
}

// Reduced-grid anechoic cyst shared by criteria 9 and 10.
struct CystFixture {
  ProbeConfig probe = ProbeConfig::reduced();
  Phantom phantom;
  ChannelData raw{probe, Alignment::kRaw};
  ChannelData tof{probe, Alignment::kTofCorrected};
  RegionMask masks;
};

const CystFixture& cyst() {
  static std::unique_ptr<CystFixture> f;
  if (!f) {
    f = std::make_unique<CystFixture>();
    f->phantom = make_phantom(PhantomPreset::kAnechoicCyst, SeedSpec{2024}, f->probe);
    f->raw = synthesize_rf(f->phantom, f->probe, PulseSpec::for_probe(f->probe));
    f->tof = tof_correct(f->raw);
    f->masks = ground_truth_masks(f->phantom, f->probe);
  }
  return *f;
}

void speckle_identity(Report& r) {
  const ChannelData cd = full_random(1);
  SpeckleParams zero;
  zero.noise_level = 0.0;
  r.check(r.timed([&] { return speckle_noise(cd, zero, SeedSpec{5}); }) == cd, "sigma^2=0 bit-identical");

  const ChannelData out = r.timed([&] { return speckle_noise(cd, SpeckleParams{}, SeedSpec{5}); });
  const auto chosen = speckle_channels(cd.num_elements(), 25);
  std::vector<bool> selected(cd.num_elements(), false);
  for (std::size_t e : chosen) selected[e] = true;
  std::size_t changed = 0, wrong = 0;
  for (std::size_t e = 0; e < cd.num_elements(); ++e) {
    const auto a = cd.element_slice(e), b = out.element_slice(e);
    const bool differs = !std::equal(a.begin(), a.end(), b.begin());
    changed += differs;
    wrong += differs != selected[e];
  }
  r.check(changed == 25 && wrong == 0, "modified slices " + Report::fmt(changed) + " (strided set exact)");
}

void speckle_statistics(Report& r) {
  const ProbeConfig p;
  const ChannelData out = speckle_noise(ChannelData(p, Alignment::kTofCorrected), SpeckleParams{}, SeedSpec{11});
  std::vector<double> xs;
  for (std::size_t e : speckle_channels(p.num_elements, 25)) {
    for (std::size_t t = 2; t + 2 < p.num_samples; t += 5) {
      for (std::size_t l = 1; l + 1 < p.num_lines; l += 3) xs.push_back(out(e, t, l));
    }
  }
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / (n - 1.0) / n);
  const double expected = 2.0 * 4.5 * oracle::speckle_kernel_energy();
  r.check(xs.size() >= 100000, "n=" + Report::fmt(xs.size()));
  r.check(std::abs(mean - expected) <= 3.0 * se,
          "mean " + Report::fmt(mean) + " vs " + Report::fmt(expected) + " (se " + Report::fmt(se) + ")");
}

void spec_augment_round_trip(Report& r) {
  const ChannelData cd = full_random(3);
  SpecAugmentParams p;
  p.enable_stretch = false;
  p.enable_mask = false;
  const ChannelData out = spec_augment(cd, p, SeedSpec{1});
  double worst = 0.0;
  for (std::size_t e = 0; e < cd.num_elements(); ++e) {
    for (std::size_t t = p.fft_size; t + p.fft_size < cd.num_samples(); ++t) {
      for (std::size_t l = 0; l < cd.num_lines(); ++l) {
        worst = std::max(worst, static_cast<double>(std::abs(out(e, t, l) - cd(e, t, l))));
      }
    }
  }
  r.check(worst < 1e-6, "max interior error " + Report::fmt(worst));
}

void spec_augment_masking(Report& r) {
  const ChannelData cd = full_random(4);
  const SpecAugmentParams p;
  SpecAugmentPlan plan = identity_plan(cd.shape(), p);
  plan.freq = {40, p.max_mask_freq_bins};
  const ChannelData out = apply_spec_augment(cd, p, plan);
  double before = 0.0, after = 0.0;
  for (std::size_t e = 0; e < cd.num_elements(); e += 16) {
    for (std::size_t l = 0; l < cd.num_lines(); l += 16) {
      std::vector<double> a(cd.num_samples()), b(cd.num_samples());
      for (std::size_t t = 0; t < a.size(); ++t) {
        a[t] = cd(e, t, l);
        b[t] = out(e, t, l);
      }
      before += oracle::band_energy(a, p.fft_size, p.hop, 0, 40, 56);
      after += oracle::band_energy(b, p.fft_size, p.hop, 0, 40, 56);
    }
  }
  r.check(after < 0.01 * before,
          Report::fmt(plan.freq.length) + "-bin band energy ratio " + Report::fmt(after / before));
}

Image correlated(const Image& x, std::uint64_t seed, float sd) {
  Image y = x;
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> n(0.0f, sd);
  for (float& v : y.values()) v = std::clamp(v + n(rng), 0.0f, 1.0f);
  return y;
}

void ms_ssim_correctness(Report& r) {
  const Image a = test::random_image(256, 256, 1);
  r.check(std::abs(ms_ssim(a, a) - 1.0) <= 1e-9, "ms_ssim(x,x)=" + Report::fmt(ms_ssim(a, a)));

  double worst = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const Image x = test::random_image(256, 256, 100 + s);
    const Image y = correlated(x, 200 + s, 0.1f + 0.1f * static_cast<float>(s));
    worst = std::max(worst, std::abs(ms_ssim(x, y) - oracle::ms_ssim(to_double(x), to_double(y))));
  }
  r.check(worst <= 1e-6, "oracle gap " + Report::fmt(worst));

  double lowest = 1.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Image x = test::random_image(256, 256, 1000 + 2 * s);
    const Image y = s % 2 == 0 ? test::random_image(256, 256, 1001 + 2 * s) : correlated(x, s, 0.2f);
    lowest = std::min(lowest, ms_ssim_loss(x, y));
  }
  r.check(lowest >= 0.0, "min loss over 100 pairs " + Report::fmt(lowest));
}

void loss_decompositions(Report& r) {
  const Image y = test::textured_image(256, 256, 5);
  const Image yhat = correlated(y, 6, 0.05f);
  const std::vector<double> lp = {0.4, -0.3, 1.7, 0.0}, lt = {-1.0, 2.2, 0.5, 0.3};
  const std::size_t label = 1;
  auto ce = [](const std::vector<double>& z, std::size_t k) {
    double s = 0.0;
    for (double v : z) s += std::exp(v);
    return std::log(s) - z[k];
  };
  auto rel = [](double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); };
  double mse_direct = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = static_cast<double>(yhat.values()[i]) - y.values()[i];
    mse_direct += d * d;
  }
  mse_direct /= static_cast<double>(y.size());
  const double ssim_part = 1.0 - ms_ssim(yhat, y);

  double worst = 0.0;
  for (double lambda : {0.0, 0.8, 1.0}) {
    LossParams p;
    p.lambda = lambda;
    worst = std::max(worst, rel(ubb_loss(yhat, y, p), lambda * mse_direct + (1.0 - lambda) * ssim_part));
  }
  const double fb = ce(lp, label) + ce(lt, label);
  worst = std::max(worst, rel(feedback_loss(lp, lt, label), fb));
  const double ubb = ubb_loss(yhat, y);
  for (double gamma : {0.0, 100.0}) {
    LossParams p;
    p.gamma = gamma;
    worst = std::max(worst, rel(jbc_loss(yhat, y, lp, lt, label, p), gamma * ubb + fb));
  }
  worst = std::max(worst, rel(cdcb_loss(yhat, y, lp, label), ubb + ce(lp, label)));
  r.check(worst <= 1e-12, "max relative gap " + Report::fmt(worst));
}

void metric_oracles(Report& r) {
  RegionMask halves{Mask(64, 64), Mask(64, 64)};
  Image two(64, 64), cnr_img(64, 64);
  for (std::size_t i = 0; i < 64; ++i) {
    for (std::size_t j = 0; j < 64; ++j) {
      (j < 32 ? halves.lesion : halves.background)(i, j) = 1;
      two(i, j) = j < 32 ? 0.1f : 0.8f;
      const double mu = j < 32 ? 0.2 : 0.6;
      cnr_img(i, j) = static_cast<float>(mu + ((i + j) % 2 == 0 ? 0.1 : -0.1));
    }
  }
  const double cr = contrast_metrics(two, halves).cr_db;
  r.check(std::abs(cr - 18.0618) <= 1e-4 && std::abs(cr - 20.0 * std::log10(8.0)) <= 1e-6, "CR " + Report::fmt(cr));
  const double cnr = contrast_metrics(cnr_img, halves).cnr_db;
  r.check(std::abs(cnr - 9.0309) <= 1e-4, "CNR " + Report::fmt(cnr));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 10000;
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = 0.4 * u(rng), b[i] = 0.6 + 0.4 * u(rng);
  const double disjoint = gcnr(a, b);
  r.check(disjoint == 1.0, "gCNR disjoint " + Report::fmt(disjoint));

  std::vector<double> pool(2 * n);
  for (double& v : pool) v = u(rng);
  const std::span<const double> all(pool);
  std::vector<double> shuffled(all.first(n).begin(), all.first(n).end());
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const double same_samples = gcnr(all.first(n), shuffled);
  r.check(same_samples <= 0.05, "gCNR identical samples " + Report::fmt(same_samples));
  const double same_density = gcnr(all.first(n), all.last(n));
  r.check(same_density <= 0.05, "gCNR independent draws of one density " + Report::fmt(same_density));

  for (std::size_t i = 0; i < n; ++i) {
    a[i] = (static_cast<double>(i) + u(rng)) / static_cast<double>(n);
    b[i] = 0.5 + (static_cast<double>(i) + u(rng)) / static_cast<double>(n);
  }
  const double half = gcnr(a, b);
  r.check(std::abs(half - 0.5) <= 0.03, "gCNR half-overlap " + Report::fmt(half));
}

void beamforming_geometry(Report& r) {
  const ProbeConfig p = ProbeConfig::reduced();
  const Phantom ph = make_phantom(PhantomPreset::kPointTarget, SeedSpec{0}, p);
  const ChannelData tof = tof_correct(synthesize_rf(ph, p, PulseSpec::for_probe(p)));
  const double t_truth = static_cast<double>(p.num_samples) / 2.0;
  const double l_truth = static_cast<double>(p.num_lines) / 2.0;

  const PreImage env_das = envelope(das(tof));
  const PreImage env_mv = envelope(mv(tof));
  const auto [dt, dl] = argmax_abs(env_das);
  const auto [mt, ml] = argmax_abs(env_mv);
  auto near = [](std::size_t got, double want) { return std::abs(static_cast<double>(got) - want) <= 1.0; };
  r.check(near(dt, t_truth) && near(dl, l_truth), "DAS peak (" + Report::fmt(dt) + "," + Report::fmt(dl) + ")");
  r.check(near(mt, t_truth) && near(ml, l_truth), "MV peak (" + Report::fmt(mt) + "," + Report::fmt(ml) + ")");

  double worst = 0.0;
  const auto l = static_cast<std::size_t>(l_truth);
  for (std::size_t e = 0; e < p.num_elements; ++e) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < p.num_samples; ++t) {
      if (std::abs(tof(e, t, l)) > std::abs(tof(e, best, l))) best = t;
    }
    worst = std::max(worst, std::abs(static_cast<double>(best) - t_truth));
  }
  r.check(worst <= 1.0, "max element misalignment " + Report::fmt(worst) + " samples");

  const double w_das = lateral_width_6db(env_das, dt);
  const double w_mv = lateral_width_6db(env_mv, dt);
  r.check(w_mv <= w_das, "-6 dB width MV " + Report::fmt(w_mv) + " vs DAS " + Report::fmt(w_das) + " lines");
}

void mv_limit(Report& r) {
  const CystFixture& f = cyst();
  const std::size_t E = f.probe.num_elements;
  MvParams p;
  p.diagonal_loading = 1e6;
  p.subaperture_len = E;
  MvDiagnostics diag;
  const double err_full = relative_rms(mv(f.tof, p, &diag), das(f.tof));
  r.check(err_full <= 0.01, "Lsub=E rel RMS vs DAS " + Report::fmt(err_full));
  r.check(diag.max_constraint_error <= 1e-10, "max |a^T w - 1| " + Report::fmt(diag.max_constraint_error));

  // With the default spatial smoothing the same limit is the uniform subaperture average.
  MvParams smoothed;
  smoothed.diagonal_loading = 1e6;
  MvDiagnostics diag_s;
  const PreImage mv_s = mv(f.tof, smoothed, &diag_s);
  const double err_smooth = relative_rms(mv_s, oracle::uniform_subaperture_sum(f.tof, smoothed.resolved_subaperture(E)));
  r.check(err_smooth <= 0.01, "Lsub=E/2 rel RMS vs subaperture average " + Report::fmt(err_smooth));
  r.check(diag_s.max_constraint_error <= 1e-10, "Lsub=E/2 max |a^T w - 1| " + Report::fmt(diag_s.max_constraint_error));
}

void contrast_ordering(Report& r) {
  const CystFixture& f = cyst();
  const BModeImage das_img = form_image(das(f.tof));
  const BModeImage mv_img = form_image(mv(f.tof));
  const double g_das = contrast_metrics(histogram_match(das_img, das_img), f.masks).gcnr;
  const double g_mv = contrast_metrics(histogram_match(mv_img, das_img), f.masks).gcnr;
  r.check(g_das > 0.5, "gCNR DAS " + Report::fmt(g_das));
  r.check(g_mv > 0.5, "gCNR MV " + Report::fmt(g_mv));

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ChannelData noisy = speckle_noise(f.raw, SpeckleParams{}, SeedSpec{seed});
    const BModeImage img = form_image(das(tof_correct(noisy)));
    const double g = contrast_metrics(histogram_match(img, das_img), f.masks).gcnr;
    r.check(g <= g_das + 0.02, "speckled DAS gCNR (seed " + Report::fmt(seed) + ") " + Report::fmt(g));
  }
}

void determinism_and_formats(Report& r) {
  const ChannelData cd = test::random_channel_data(test::tiny_probe(32, 512, 32), Alignment::kRaw, 9);
  const SeedSpec s{314};
  SpeckleParams sp;
  sp.num_noisy_channels = 8;
  PipelineConfig pc;
  pc.speckle = sp;
  pc.speckle_prob = pc.gaussian_prob = pc.specaugment_prob = pc.subsample_prob = pc.dropout_prob = 1.0;
  pc.seed = s;
  const ProbeConfig red = ProbeConfig::reduced();
  const bool same =
      speckle_noise(cd, sp, s) == speckle_noise(cd, sp, s) && gaussian_noise(cd, s) == gaussian_noise(cd, s) &&
      spec_augment(cd, SpecAugmentParams{}, s) == spec_augment(cd, SpecAugmentParams{}, s) &&
      subsample_mask(cd, SubsampleParams{}, s) == subsample_mask(cd, SubsampleParams{}, s) &&
      coarse_dropout(cd, DropoutParams{}, s) == coarse_dropout(cd, DropoutParams{}, s) &&
      augment_pipeline(cd, pc) == augment_pipeline(cd, pc) &&
      make_phantom(PhantomPreset::kAnechoicCyst, s, red).scatterers ==
          make_phantom(PhantomPreset::kAnechoicCyst, s, red).scatterers;
  r.check(same, "stochastic ops reproducible");

  test::TempDir dir("acceptance");
  write_channel_data(cd, dir / "a.uscd");
  r.check(read_channel_data(dir / "a.uscd") == cd, "USCD round trip exact");
  const BModeImage img(test::random_image(kBModeSize, kBModeSize, 4));
  write_image(img, dir / "a.png");
  const Image once = read_image(dir / "a.png");
  write_image(once, dir / "b.png");
  r.check(read_image(dir / "b.png") == once, "PNG round trip exact");

  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const auto run_dir = (dir / "pipeline").string();
  const int code = cli::run({"pipeline", "--preset", "cyst", "--seed", "5", "--grid", "reduced", "--method", "both",
                             "--out-dir", run_dir},
                            out, err);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.check(code == 0 && std::filesystem::exists(dir / "pipeline" / "metrics.jsonl"),
          "CLI pipeline exit " + Report::fmt(code) + (err.str().empty() ? "" : " (" + err.str() + ")"));
  r.check(secs < 300.0, "CLI pipeline " + Report::fmt(secs) + " s");
}

}  // namespace
}  // namespace usbeam::acceptance

int main() {
  using namespace usbeam::acceptance;
  const std::vector<Criterion> criteria = {
      {1, "speckle identity", 1.0, speckle_identity},
      {2, "speckle statistics", 10.0, speckle_statistics},
      {3, "spec_augment round trip", 60.0, spec_augment_round_trip},
      {4, "spec_augment masking", 60.0, spec_augment_masking},
      {5, "ms_ssim correctness", 30.0, ms_ssim_correctness},
      {6, "loss decompositions", 1.0, loss_decompositions},
      {7, "metric oracles", 10.0, metric_oracles},
      {8, "beamforming geometry", 60.0, beamforming_geometry},
      {9, "mv large-loading limit", 60.0, mv_limit},
      {10, "contrast ordering", 120.0, contrast_ordering},
      {11, "determinism and formats", 300.0, determinism_and_formats},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(r);
    } catch (const std::exception& e) {
      r.check(false, std::string("exception: ") + e.what());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::optional<double> charged = r.charged_seconds();
    const double secs = charged.value_or(wall);
    r.check(secs <= c.budget_s, std::string(charged ? "operation time " : "time ") + Report::fmt(secs) + " s of " +
                                    Report::fmt(c.budget_s) + " s (wall " + Report::fmt(wall) + " s)");
    failures += !r.passed();
    std::printf("%s [%2d] %s: %s\n", r.passed() ? "PASS" : "FAIL", c.id, c.title.c_str(), r.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
