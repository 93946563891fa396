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

#include "causal_calib/causality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "causal_calib/error.hpp"
#include "causal_calib/stats.hpp"
#include "parallel.hpp"

namespace causal_calib::causality {

double gaussian_log_likelihood(double ssr, std::size_t n_obs) {
  const double n = static_cast<double>(n_obs);
  if (ssr <= 0.0) return std::numeric_limits<double>::infinity();
  return -0.5 * n * (std::log(2.0 * std::numbers::pi) + std::log(ssr / n) + 1.0);
}

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != n) {
    throw ValidationError("ols: design has " + std::to_string(n) + " rows but y has " +
                          std::to_string(y.size()));
  }
  if (k < 1 || n <= k) {
    throw ValidationError("ols: need more observations (" + std::to_string(n) + ") than parameters (" +
                          std::to_string(k) + ")");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw ValidationError("ols: non-finite value in design or response");
  }

  // Householder QR, applied to y as we go.
  Eigen::MatrixXd R = X;
  Eigen::VectorXd qty = y;
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index len = n - j;
    const double norm = R.col(j).tail(len).norm();
    if (norm == 0.0) continue;
    const double alpha = R(j, j) > 0.0 ? -norm : norm;
    Eigen::VectorXd v = R.col(j).tail(len);
    v(0) -= alpha;
    const double vv = v.squaredNorm();
    if (vv > 0.0) {
      for (Eigen::Index c = j; c < k; ++c) {
        const double s = 2.0 * v.dot(R.col(c).tail(len)) / vv;
        R.col(c).tail(len) -= s * v;
      }
      const double s = 2.0 * v.dot(qty.tail(len)) / vv;
      qty.tail(len) -= s * v;
    }
    R(j, j) = alpha;
    R.col(j).tail(len - 1).setZero();
  }

  double max_diag = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) max_diag = std::max(max_diag, std::abs(R(j, j)));
  for (Eigen::Index j = 0; j < k; ++j) {
    if (max_diag == 0.0 || std::abs(R(j, j)) <= kRankTolerance * max_diag) {
      throw RankDeficientError("ols: rank-deficient design (perfect collinearity at column " +
                                   std::to_string(j) + ")",
                               static_cast<int>(j));
    }
  }

  const auto upper = R.topLeftCorner(k, k).triangularView<Eigen::Upper>();
  OlsFit fit;
  fit.coefficients = upper.solve(qty.head(k));
  fit.residuals = y - X * fit.coefficients;
  fit.ssr = fit.residuals.squaredNorm();
  fit.n_obs = static_cast<std::size_t>(n);
  fit.n_params = static_cast<std::size_t>(k);
  fit.log_likelihood = gaussian_log_likelihood(fit.ssr, fit.n_obs);

  // diag((X'X)^-1) = squared row norms of R^-1.
  const Eigen::MatrixXd r_inv = upper.solve(Eigen::MatrixXd::Identity(k, k));
  const double s2 = fit.ssr / static_cast<double>(n - k);
  fit.standard_errors = (r_inv.rowwise().squaredNorm() * s2).cwiseSqrt();
  return fit;
}

// ---------------------------------------------------------------------------

int schwert_max_lag(std::size_t n) {
  return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

namespace {

// Rows t = first..dy.size()-1 of dy_t = a + rho * y_t + sum_j g_j dy_{t-j}.
OlsFit adf_regression(std::span<const double> level, const std::vector<double>& dy, int lags,
                      std::size_t first) {
  const auto rows = static_cast<Eigen::Index>(dy.size() - first);
  Eigen::MatrixXd X(rows, 2 + lags);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t t = first + static_cast<std::size_t>(r);
    y(r) = dy[t];
    X(r, 0) = 1.0;
    X(r, 1) = level[t];
    for (int j = 1; j <= lags; ++j) X(r, 1 + j) = dy[t - j];
  }
  return ols(y, X);
}

}  // namespace

AdfResult adf_test(std::span<const double> series, int max_extra_lags) {
  const std::size_t n = series.size();
  if (n < 20) {
    throw ValidationError("adf: series length " + std::to_string(n) + " is below the minimum of 20");
  }
  auto fits = [n](int lags) {
    // n - 1 differences, minus `lags` start-up rows, must exceed the
    // 2 + lags parameters by a margin.
    return static_cast<long>(n) - 1 - lags > 2L * lags + 2 + 1;
  };
  if (max_extra_lags < 0) {
    max_extra_lags = schwert_max_lag(n);
    while (max_extra_lags > 0 && !fits(max_extra_lags)) --max_extra_lags;
  } else if (!fits(max_extra_lags)) {
    throw ValidationError("adf: series too short (" + std::to_string(n) + ") for " +
                          std::to_string(max_extra_lags) + " extra lags");
  }
  for (double v : series) {
    if (!std::isfinite(v)) throw ValidationError("adf: non-finite value in series");
  }

  std::vector<double> dy(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) dy[t] = series[t + 1] - series[t];

  int best_lag = 0;
  double best_aic = std::numeric_limits<double>::infinity();
  const auto common_first = static_cast<std::size_t>(max_extra_lags);
  for (int q = 0; q <= max_extra_lags; ++q) {
    const OlsFit fit = adf_regression(series, dy, q, common_first);
    const double aic = 2.0 * static_cast<double>(fit.n_params) - 2.0 * fit.log_likelihood;
    if (aic < best_aic) {
      best_aic = aic;
      best_lag = q;
    }
  }

  const OlsFit fit = adf_regression(series, dy, best_lag, static_cast<std::size_t>(best_lag));
  AdfResult r;
  r.statistic = fit.coefficients(1) / fit.standard_errors(1);
  r.lags_used = best_lag;
  r.n_obs = fit.n_obs;
  r.reject_unit_root = r.statistic < r.critical_values.five_pct;
  return r;
}

// ---------------------------------------------------------------------------

DofConvention parse_dof_convention(std::string_view name) {
  if (name == "unrestricted") return DofConvention::kUnrestrictedParams;
  if (name == "lag-plus-one") return DofConvention::kLagPlusOne;
  throw ValidationError("unknown dof convention '" + std::string(name) +
                        "' (allowed: unrestricted, lag-plus-one)");
}

std::string_view to_string(DofConvention dof) {
  return dof == DofConvention::kUnrestrictedParams ? "unrestricted" : "lag-plus-one";
}

std::string_view to_string(CausalCase c) {
  switch (c) {
    case CausalCase::kXCausesY:
      return "x-causes-y";
    case CausalCase::kYCausesX:
      return "y-causes-x";
    case CausalCase::kMutual:
      return "mutual";
    case CausalCase::kIndependent:
      return "independent";
  }
  return "?";
}

double granger_f_statistic(double ssr_restricted, double ssr_unrestricted, int restrictions,
                           int df_denominator) {
  if (restrictions < 1 || df_denominator < 1) {
    throw ValidationError("F statistic needs positive degrees of freedom");
  }
  const double gain = std::max(0.0, ssr_restricted - ssr_unrestricted);
  if (ssr_unrestricted <= 0.0) {
    return gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return (gain / restrictions) / (ssr_unrestricted / df_denominator);
}

GrangerLagResult granger_lag(std::span<const double> y, std::span<const double> x, int k,
                             DofConvention dof) {
  if (k < 1) throw ValidationError("granger: lag must be >= 1");
  if (y.size() != x.size()) {
    throw ValidationError("granger: series lengths differ (" + std::to_string(y.size()) + " vs " +
                          std::to_string(x.size()) + ")");
  }
  const std::size_t n = y.size();
  const long rows = static_cast<long>(n) - k;
  const long params_u = 2L * k + 1;
  if (rows <= params_u) {
    throw ValidationError("granger: insufficient observations (" + std::to_string(n) +
                          ") for lag " + std::to_string(k));
  }

  Eigen::MatrixXd xu(rows, params_u);
  Eigen::VectorXd target(rows);
  for (long r = 0; r < rows; ++r) {
    const std::size_t t = static_cast<std::size_t>(r + k);
    target(r) = y[t];
    xu(r, 0) = 1.0;
    for (int i = 1; i <= k; ++i) {
      xu(r, i) = y[t - i];
      xu(r, k + i) = x[t - i];
    }
  }
  const OlsFit restricted = ols(target, xu.leftCols(k + 1));
  const OlsFit unrestricted = ols(target, xu);

  GrangerLagResult out;
  out.lag = k;
  out.restrictions = k;
  out.n_obs = static_cast<std::size_t>(rows);
  out.ssr_restricted = restricted.ssr;
  // Nested models: any excess is rounding.
  out.ssr_unrestricted = std::min(unrestricted.ssr, restricted.ssr);
  out.df_denominator = static_cast<int>(dof == DofConvention::kUnrestrictedParams ? rows - params_u
                                                                                  : rows - k - 1);
  out.f_stat = granger_f_statistic(out.ssr_restricted, out.ssr_unrestricted, k, out.df_denominator);
  out.p_value = stats::f_survival(out.f_stat, k, out.df_denominator);
  return out;
}

CausalCase classify(std::span<const GrangerLagResult> xy, std::span<const GrangerLagResult> yx,
                    double adjusted_alpha) {
  auto any_significant = [adjusted_alpha](std::span<const GrangerLagResult> d) {
    return std::any_of(d.begin(), d.end(),
                       [adjusted_alpha](const auto& r) { return r.p_value < adjusted_alpha; });
  };
  const bool forward = any_significant(xy);
  const bool backward = any_significant(yx);
  if (forward && backward) return CausalCase::kMutual;
  if (forward) return CausalCase::kXCausesY;
  if (backward) return CausalCase::kYCausesX;
  return CausalCase::kIndependent;
}

GrangerReport granger_sweep(std::span<const double> y, std::span<const double> x,
                            const SweepOptions& options) {
  if (options.max_lag < 1) throw ValidationError("granger: max lag must be >= 1");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw ValidationError("granger: alpha must be in (0, 1)");
  }
  GrangerReport report;
  report.alpha = options.alpha;
  report.max_lag = options.max_lag;
  report.adjusted_alpha = options.alpha / options.max_lag;
  const auto lags = static_cast<std::size_t>(options.max_lag);
  report.direction_xy.resize(lags);
  report.direction_yx.resize(lags);

  // Task i < lags is x -> y at lag i + 1; the rest are y -> x.
  detail::parallel_for(2 * lags, detail::resolve_threads(options.threads), [&](std::size_t i) {
    const int k = static_cast<int>(i % lags) + 1;
    if (i < lags) {
      report.direction_xy[i] = granger_lag(y, x, k, options.dof);
    } else {
      report.direction_yx[i - lags] = granger_lag(x, y, k, options.dof);
    }
  });

  for (const auto& r : report.direction_xy) {
    if (r.p_value < options.alpha) report.significant_lags_xy.push_back(r.lag);
  }
  for (const auto& r : report.direction_yx) {
    if (r.p_value < options.alpha) report.significant_lags_yx.push_back(r.lag);
  }
  report.causal_case = classify(report.direction_xy, report.direction_yx, report.adjusted_alpha);
  return report;
}

namespace {

StationarityCheck check_one(std::span<const double> s, int adf_max_lags, std::string_view name,
                            std::vector<double>& out) {
  StationarityCheck check;
  check.initial = adf_test(s, adf_max_lags);
  out.assign(s.begin(), s.end());
  if (check.initial.reject_unit_root) return check;
  std::vector<double> diff(s.size() - 1);
  for (std::size_t t = 0; t + 1 < s.size(); ++t) diff[t] = s[t + 1] - s[t];
  check.after_difference = adf_test(diff, adf_max_lags);
  check.differenced = true;
  if (!check.after_difference->reject_unit_root) {
    throw ValidationError("series '" + std::string(name) +
                          "' is not stationary at 5% even after one difference (ADF " +
                          std::to_string(check.after_difference->statistic) + ")");
  }
  out = std::move(diff);
  return check;
}

}  // namespace

StationaryPair make_stationary(std::span<const double> y, std::span<const double> x,
                               int adf_max_lags) {
  if (y.size() != x.size()) throw ValidationError("series lengths differ");
  StationaryPair pair;
  pair.y_check = check_one(y, adf_max_lags, "y", pair.y);
  pair.x_check = check_one(x, adf_max_lags, "x", pair.x);
  if (pair.y.size() != pair.x.size()) {
    auto& longer = pair.y.size() > pair.x.size() ? pair.y : pair.x;
    longer.erase(longer.begin());
    pair.dropped_leading = 1;
  }
  return pair;
}

nlohmann::json to_json(const AdfResult& r) {
  return {{"statistic", r.statistic},
          {"lags_used", r.lags_used},
          {"n_obs", r.n_obs},
          {"critical_values",
           {{"1%", r.critical_values.one_pct},
            {"5%", r.critical_values.five_pct},
            {"10%", r.critical_values.ten_pct}}},
          {"reject_unit_root", r.reject_unit_root}};
}

namespace {

nlohmann::json lag_array(const std::vector<GrangerLagResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"lag", r.lag},
                   {"f_stat", r.f_stat},
                   {"p_value", r.p_value},
                   {"ssr_r", r.ssr_restricted},
                   {"ssr_u", r.ssr_unrestricted},
                   {"df_num", r.restrictions},
                   {"df_den", r.df_denominator}});
  }
  return arr;
}

}  // namespace

nlohmann::json to_json(const GrangerReport& report) {
  return {{"alpha", report.alpha},
          {"max_lag", report.max_lag},
          {"adjusted_alpha", report.adjusted_alpha},
          {"case", std::string(to_string(report.causal_case))},
          {"significant_lags_xy", report.significant_lags_xy},
          {"significant_lags_yx", report.significant_lags_yx},
          {"x_to_y", lag_array(report.direction_xy)},
          {"y_to_x", lag_array(report.direction_yx)}};
}

}  // namespace causal_calib::causality
