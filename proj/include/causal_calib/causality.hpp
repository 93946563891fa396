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
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace causal_calib::causality {

/// Ordinary least squares fit. Coefficients are ordered like the design
/// columns (intercept first by convention).
struct OlsFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;  ///< from s^2 = ssr / (T - k)
  Eigen::VectorXd residuals;
  double ssr = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_params = 0;
  double log_likelihood = 0.0;  ///< Gaussian, with sigma^2 = ssr / T
};

/// Relative tolerance on |R_jj| / max_i |R_ii| below which a design column
/// is treated as linearly dependent on the preceding ones.
inline constexpr double kRankTolerance = 1e-10;

/// Least squares via Householder QR. Throws RankDeficientError naming the
/// first dependent column, ValidationError on shape problems.
OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

/// Gaussian log-likelihood at the MLE variance.
double gaussian_log_likelihood(double ssr, std::size_t n_obs);

// ---------------------------------------------------------------------------
// Augmented Dickey-Fuller

struct CriticalValues {
  double one_pct = -3.43;
  double five_pct = -2.86;
  double ten_pct = -2.57;
};

/// Large-sample Dickey-Fuller critical values, constant but no trend.
inline constexpr CriticalValues kDickeyFullerConstant{};

struct AdfResult {
  double statistic = 0.0;
  int lags_used = 0;
  std::size_t n_obs = 0;
  CriticalValues critical_values = kDickeyFullerConstant;
  bool reject_unit_root = false;  ///< statistic < 5% critical value
};

/// Schwert's rule 12 * (n / 100)^(1/4), the default maximum lag.
int schwert_max_lag(std::size_t n);

/// Regresses dy_t on {1, y_{t-1}, dy_{t-1}, ..., dy_{t-q}}. The lag order q
/// minimises AIC over 0..max_extra_lags on a common estimation sample and
/// the chosen model is refit on all usable rows. A negative
/// `max_extra_lags` selects schwert_max_lag.
AdfResult adf_test(std::span<const double> series, int max_extra_lags = -1);

// ---------------------------------------------------------------------------
// Granger causality

/// How the F-test denominator degrees of freedom are counted.
enum class DofConvention {
  kUnrestrictedParams,  ///< T - (2k + 1): residual dof of the unrestricted model
  kLagPlusOne,          ///< T - k - 1, read literally
};

DofConvention parse_dof_convention(std::string_view name);
std::string_view to_string(DofConvention dof);

struct GrangerLagResult {
  int lag = 0;
  double f_stat = 0.0;
  double p_value = 1.0;
  double ssr_restricted = 0.0;
  double ssr_unrestricted = 0.0;
  int restrictions = 0;
  int df_denominator = 0;
  std::size_t n_obs = 0;
};

/// ((ssr_r - ssr_u) / p) / (ssr_u / df_den).
double granger_f_statistic(double ssr_restricted, double ssr_unrestricted, int restrictions,
                           int df_denominator);

/// Does x help predict y at lag order k? Restricted model: y_t on
/// {1, y_{t-1..k}}; unrestricted adds x_{t-1..k}. Both use the same rows
/// (the first k observations dropped).
GrangerLagResult granger_lag(std::span<const double> y, std::span<const double> x, int k,
                             DofConvention dof = DofConvention::kUnrestrictedParams);

enum class CausalCase { kXCausesY, kYCausesX, kMutual, kIndependent };

std::string_view to_string(CausalCase c);

struct SweepOptions {
  int max_lag = 30;
  double alpha = 0.05;
  DofConvention dof = DofConvention::kUnrestrictedParams;
  /// 0 means hardware concurrency (capped by CAUSAL_CALIB_THREADS).
  unsigned threads = 1;
};

struct GrangerReport {
  std::vector<GrangerLagResult> direction_xy;  ///< x -> y, lag order 1..max_lag
  std::vector<GrangerLagResult> direction_yx;  ///< y -> x
  double alpha = 0.05;
  int max_lag = 0;
  /// alpha / max_lag; a direction is causal iff some lag has p below this.
  double adjusted_alpha = 0.05;
  CausalCase causal_case = CausalCase::kIndependent;
  std::vector<int> significant_lags_xy;  ///< raw p < alpha
  std::vector<int> significant_lags_yx;
};

/// Classifies from the two p-value sequences with a Bonferroni threshold.
CausalCase classify(std::span<const GrangerLagResult> xy, std::span<const GrangerLagResult> yx,
                    double adjusted_alpha);

/// Tests both directions at every lag 1..max_lag. Lags are independent
/// and may run on several threads; results are stored in lag order.
GrangerReport granger_sweep(std::span<const double> y, std::span<const double> x,
                            const SweepOptions& options);

/// The series fed to granger_sweep after the stationarity gate.
struct StationarityCheck {
  AdfResult initial;
  std::optional<AdfResult> after_difference;
  bool differenced = false;
};

struct StationaryPair {
  std::vector<double> y;
  std::vector<double> x;
  StationarityCheck y_check;
  StationarityCheck x_check;
  std::size_t dropped_leading = 0;  ///< rows dropped to re-align lengths
};

/// Runs ADF on both series. A series that fails at 5% is differenced once
/// and retested; failing again throws ValidationError. When only one
/// series is differenced the other loses its first element so the two stay
/// aligned.
StationaryPair make_stationary(std::span<const double> y, std::span<const double> x,
                               int adf_max_lags = -1);

nlohmann::json to_json(const AdfResult& r);
nlohmann::json to_json(const GrangerReport& report);

}  // namespace causal_calib::causality
