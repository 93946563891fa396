/*
 * Copyright 2026 The causal-calib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "causal_calib/nn.hpp"

namespace causal_calib::losses {

using nn::Tensor2D;

enum class LossKind { kCrossEntropy, kFocal, kFocalCalibration };

LossKind parse_loss_kind(std::string_view name);  ///< "ce" | "fl" | "fcl"
std::string_view to_string(LossKind kind);

struct LossConfig {
  LossKind kind = LossKind::kFocalCalibration;
  double gamma = 2.0;
  double lambda = 0.1;

  void validate() const;
};

/// Class probabilities for N samples over C classes, with integer labels.
/// Rows must sum to one within kRowSumTolerance.
struct PredictionBatch {
  Tensor2D probs;
  std::vector<int> labels;

  static constexpr double kRowSumTolerance = 1e-9;

  std::size_t size() const { return labels.size(); }
  Eigen::Index classes() const { return probs.cols(); }
  void validate() const;
  static PredictionBatch from_logits(const Tensor2D& logits, std::vector<int> labels);
};

/// Mean loss and its gradient with respect to the logits that produced the
/// batch probabilities through a softmax.
struct LossResult {
  double value = 0.0;
  Tensor2D grad_logits;
};

/// Floor applied inside every logarithm.
inline constexpr double kLogClamp = 1e-12;

/// -mean log p_t.
LossResult cross_entropy(const PredictionBatch& batch);

/// mean of -(1 - p_t)^gamma log p_t.
LossResult focal_loss(const PredictionBatch& batch, double gamma);

/// (1/N) sum_i sum_c |p_ic - y_ic|, differentiated with sign(0) = 0.
LossResult calib_error_term(const PredictionBatch& batch);

/// focal_loss + lambda * calib_error_term.
LossResult focal_calibration_loss(const PredictionBatch& batch, double gamma, double lambda);

/// Dispatches on config.kind; gamma and lambda are ignored where unused.
LossResult evaluate(const LossConfig& config, const PredictionBatch& batch);

struct MseResult {
  double value = 0.0;
  std::vector<double> grad;
};

/// mean (pred - target)^2 with gradient 2 (pred - target) / n.
MseResult mse_loss(std::span<const double> pred, std::span<const double> target);

}  // namespace causal_calib::losses
