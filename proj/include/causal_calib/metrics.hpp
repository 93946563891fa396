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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "causal_calib/causality.hpp"
#include "causal_calib/losses.hpp"

namespace causal_calib::metrics {

using losses::PredictionBatch;

struct ReliabilityBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double accuracy = 0.0;    ///< 0 for empty bins
  double confidence = 0.0;  ///< 0 for empty bins
};

struct ReliabilityBins {
  int m = 15;
  std::vector<ReliabilityBin> bins;
  double ece = 0.0;
  double mce = 0.0;
};

inline constexpr int kDefaultBins = 15;

/// Index of the largest entry of a row; ties go to the lowest index.
int argmax_row(const nn::Tensor2D& probs, Eigen::Index row);

/// Equal-width top-class reliability over ((m-1)/M, m/M]; a confidence of
/// exactly 0 lands in the first bin. Empty bins add nothing to ECE and are
/// skipped for MCE.
ReliabilityBins reliability(const PredictionBatch& batch, int m = kDefaultBins);

/// mean over samples of sum_c (p_ic - y_ic)^2.
double brier(const PredictionBatch& batch);

double accuracy(const PredictionBatch& batch);

struct RegressionMetrics {
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  std::optional<double> mape;  ///< percent; absent if some y_i == 0
  std::optional<double> r2;    ///< absent if y is constant
  std::vector<std::string> warnings;
};

RegressionMetrics regression_metrics(std::span<const double> y, std::span<const double> y_hat);

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
};

/// aic = 2k - 2L, bic = ln(T) k - 2L with L the Gaussian log-likelihood.
InformationCriteria information_criteria(const causality::OlsFit& fit);

nlohmann::json to_json(const ReliabilityBins& r);
nlohmann::json to_json(const RegressionMetrics& m);

/// `lo,hi,count,accuracy,confidence` rows.
std::string reliability_csv(const ReliabilityBins& r);

}  // namespace causal_calib::metrics
