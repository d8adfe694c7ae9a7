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

#include "usbeam/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace usbeam {
namespace {

void require_same_shape(const Image& a, const Image& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument(std::string(who) + ": image shapes differ");
  }
  if (a.size() == 0) throw InvalidArgument(std::string(who) + ": empty image");
}

}  // namespace

void LossParams::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("LossParams: lambda must lie in [0, 1]");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("LossParams: gamma must be >= 0");
}

double mse(const Image& yhat, const Image& y) {
  require_same_shape(yhat, y, "mse");
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = static_cast<double>(yhat.values()[i]) - static_cast<double>(y.values()[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(y.size());
}

double ms_ssim_loss(const Image& yhat, const Image& y, const MsSsimParams& mp) {
  return 1.0 - ms_ssim(yhat, y, mp);
}

double ubb_loss(const Image& yhat, const Image& y, const LossParams& lp, const MsSsimParams& mp) {
  lp.validate();
  require_same_shape(yhat, y, "ubb_loss");
  return lp.lambda * mse(yhat, y) + (1.0 - lp.lambda) * ms_ssim_loss(yhat, y, mp);
}

double cross_entropy(std::span<const double> logits, std::size_t label) {
  if (logits.size() < 2) throw InvalidArgument("cross_entropy: need at least 2 classes");
  if (label >= logits.size()) throw InvalidArgument("cross_entropy: label out of range");
  for (double v : logits) {
    if (!std::isfinite(v)) throw InvalidArgument("cross_entropy: non-finite logit");
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - peak);
  return std::log(sum) + (peak - logits[label]);
}

double feedback_loss(std::span<const double> logits_yhat, std::span<const double> logits_y,
                     std::size_t label) {
  if (logits_yhat.size() != logits_y.size()) throw InvalidArgument("feedback_loss: class counts differ");
  return cross_entropy(logits_yhat, label) + cross_entropy(logits_y, label);
}

double jbc_loss(const Image& yhat, const Image& y, std::span<const double> logits_yhat,
                std::span<const double> logits_y, std::size_t label, const LossParams& lp,
                const MsSsimParams& mp) {
  return lp.gamma * ubb_loss(yhat, y, lp, mp) + feedback_loss(logits_yhat, logits_y, label);
}

double cdcb_loss(const Image& yhat, const Image& y, std::span<const double> logits, std::size_t label,
                 const LossParams& lp, const MsSsimParams& mp) {
  return ubb_loss(yhat, y, lp, mp) + cross_entropy(logits, label);
}

}  // namespace usbeam
