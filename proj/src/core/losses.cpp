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

#include "causal_calib/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "causal_calib/error.hpp"

namespace causal_calib::losses {

LossKind parse_loss_kind(std::string_view name) {
  if (name == "ce") return LossKind::kCrossEntropy;
  if (name == "fl") return LossKind::kFocal;
  if (name == "fcl") return LossKind::kFocalCalibration;
  throw ValidationError("unknown loss '" + std::string(name) + "' (allowed: ce, fl, fcl)");
}

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kCrossEntropy:
      return "ce";
    case LossKind::kFocal:
      return "fl";
    case LossKind::kFocalCalibration:
      return "fcl";
  }
  return "?";
}

void LossConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be >= 0");
}

void PredictionBatch::validate() const {
  if (probs.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw ValidationError("prediction batch: " + std::to_string(probs.rows()) +
                          " probability rows but " + std::to_string(labels.size()) + " labels");
  }
  if (probs.cols() < 1) throw ValidationError("prediction batch: no classes");
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= probs.cols()) {
      throw ValidationError("prediction batch row " + std::to_string(i) + ": label " +
                            std::to_string(y) + " out of range");
    }
    double sum = 0.0;
    for (Eigen::Index c = 0; c < probs.cols(); ++c) {
      const double p = probs(i, c);
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw ValidationError("prediction batch row " + std::to_string(i) +
                              ": probability outside [0, 1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError("prediction batch row " + std::to_string(i) +
                            ": probabilities sum to " + std::to_string(sum) + ", not 1");
    }
  }
}

PredictionBatch PredictionBatch::from_logits(const Tensor2D& logits, std::vector<int> labels) {
  return {nn::softmax(logits), std::move(labels)};
}

namespace {

double n_of(const PredictionBatch& b) {
  if (b.size() == 0) throw ValidationError("loss of an empty batch");
  return static_cast<double>(b.size());
}

double clamped_log(double p) { return std::log(std::max(p, kLogClamp)); }

}  // namespace

LossResult cross_entropy(const PredictionBatch& batch) {
  const double n = n_of(batch);
  LossResult r;
  r.grad_logits = batch.probs / n;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const int t = batch.labels[i];
    r.value -= clamped_log(batch.probs(row, t));
    r.grad_logits(row, t) -= 1.0 / n;
  }
  r.value /= n;
  return r;
}

LossResult focal_loss(const PredictionBatch& batch, double gamma) {
  if (!(gamma >= 0.0)) throw ValidationError("gamma must be >= 0");
  const double n = n_of(batch);
  const Eigen::Index classes = batch.classes();
  LossResult r;
  r.grad_logits = Tensor2D::Zero(batch.probs.rows(), classes);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const int t = batch.labels[i];
    const double pt = batch.probs(row, t);
    const double q = 1.0 - pt;
    const double log_pt = clamped_log(pt);
    const double weight = gamma == 0.0 ? 1.0 : std::pow(q, gamma);
    r.value -= weight * log_pt;
    // dL/dz_j = [gamma q^(gamma-1) p_t log p_t - q^gamma] (delta_tj - p_j),
    // with q^(gamma-1) * q -> 0 handled by writing the first term as
    // gamma q^gamma p_t log p_t / q when q > 0.
    double first = 0.0;
    if (gamma != 0.0 && q > 0.0) first = gamma * std::pow(q, gamma - 1.0) * pt * log_pt;
    const double coeff = (first - weight) / n;
    for (Eigen::Index c = 0; c < classes; ++c) {
      const double delta = c == t ? 1.0 : 0.0;
      r.grad_logits(row, c) = coeff * (delta - batch.probs(row, c));
    }
  }
  r.value /= n;
  return r;
}

LossResult calib_error_term(const PredictionBatch& batch) {
  const double n = n_of(batch);
  const Eigen::Index classes = batch.classes();
  LossResult r;
  r.grad_logits = Tensor2D::Zero(batch.probs.rows(), classes);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const int t = batch.labels[i];
    // s_c = sign(p_c - y_c); dL/dz_j = p_j (s_j - sum_c s_c p_c) / N.
    Eigen::RowVectorXd sign(classes);
    double weighted = 0.0;
    for (Eigen::Index c = 0; c < classes; ++c) {
      const double diff = batch.probs(row, c) - (c == t ? 1.0 : 0.0);
      r.value += std::abs(diff);
      sign(c) = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      weighted += sign(c) * batch.probs(row, c);
    }
    for (Eigen::Index c = 0; c < classes; ++c) {
      r.grad_logits(row, c) = batch.probs(row, c) * (sign(c) - weighted) / n;
    }
  }
  r.value /= n;
  return r;
}

LossResult focal_calibration_loss(const PredictionBatch& batch, double gamma, double lambda) {
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be >= 0");
  LossResult r = focal_loss(batch, gamma);
  if (lambda == 0.0) return r;
  const LossResult calib = calib_error_term(batch);
  r.value += lambda * calib.value;
  r.grad_logits += lambda * calib.grad_logits;
  return r;
}

LossResult evaluate(const LossConfig& config, const PredictionBatch& batch) {
  switch (config.kind) {
    case LossKind::kCrossEntropy:
      return cross_entropy(batch);
    case LossKind::kFocal:
      return focal_loss(batch, config.gamma);
    case LossKind::kFocalCalibration:
      return focal_calibration_loss(batch, config.gamma, config.lambda);
  }
  throw ValidationError("unknown loss kind");
}

MseResult mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw ValidationError("mse: length mismatch (" + std::to_string(pred.size()) + " vs " +
                          std::to_string(target.size()) + ")");
  }
  if (pred.empty()) throw ValidationError("mse: empty input");
  const double n = static_cast<double>(pred.size());
  MseResult r;
  r.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    r.value += d * d;
    r.grad[i] = 2.0 * d / n;
  }
  r.value /= n;
  return r;
}

}  // namespace causal_calib::losses
