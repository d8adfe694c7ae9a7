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

#ifndef USBEAM_LOSSES_HPP
#define USBEAM_LOSSES_HPP

#include <cstddef>
#include <span>

#include "usbeam/ssim.hpp"
#include "usbeam/types.hpp"

namespace usbeam {

struct LossParams {
  double lambda = 0.8;
  double gamma = 100.0;

  void validate() const;
};

/// Mean squared error over all pixels.
double mse(const Image& yhat, const Image& y);

/// 1 - ms_ssim(yhat, y).
double ms_ssim_loss(const Image& yhat, const Image& y, const MsSsimParams& mp = {});

/// lambda * mse + (1 - lambda) * ms_ssim_loss.
double ubb_loss(const Image& yhat, const Image& y, const LossParams& lp = {}, const MsSsimParams& mp = {});

/// -log softmax(logits)[label], evaluated with log-sum-exp.
double cross_entropy(std::span<const double> logits, std::size_t label);

/// cross_entropy(logits_yhat, label) + cross_entropy(logits_y, label).
double feedback_loss(std::span<const double> logits_yhat, std::span<const double> logits_y,
                     std::size_t label);

/// gamma * ubb_loss + feedback_loss.
double jbc_loss(const Image& yhat, const Image& y, std::span<const double> logits_yhat,
                std::span<const double> logits_y, std::size_t label, const LossParams& lp = {},
                const MsSsimParams& mp = {});

/// ubb_loss + cross_entropy(logits, label).
double cdcb_loss(const Image& yhat, const Image& y, std::span<const double> logits, std::size_t label,
                 const LossParams& lp = {}, const MsSsimParams& mp = {});

}  // namespace usbeam

#endif  // USBEAM_LOSSES_HPP
