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

#include "causal_calib/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "causal_calib/error.hpp"
#include "causal_calib/text.hpp"

namespace causal_calib::features {

void FeatureConfig::validate() const {
  if (momentum_period < 1) throw ValidationError("momentum period must be >= 1");
  if (return_horizon < 1) throw ValidationError("return horizon must be >= 1");
  if (volatility_window < 2) throw ValidationError("volatility window must be >= 2");
}

DatedSeries momentum(const ingest::PriceSeries& series, int n) {
  if (n < 1) throw ValidationError("momentum period must be >= 1");
  if (static_cast<std::size_t>(n) >= series.size()) {
    throw ValidationError("momentum period " + std::to_string(n) +
                          " needs more than that many price bars (have " +
                          std::to_string(series.size()) + ")");
  }
  DatedSeries out;
  out.reserve(series.size() - n);
  for (std::size_t t = n; t < series.size(); ++t) {
    out.push_back({series[t].date, series[t].close - series[t - n].close});
  }
  return out;
}

DatedSeries returns_pct(const ingest::PriceSeries& series, int horizon) {
  if (horizon < 1) throw ValidationError("return horizon must be >= 1");
  if (static_cast<std::size_t>(horizon) >= series.size()) {
    throw ValidationError("return horizon " + std::to_string(horizon) +
                          " needs more than that many price bars");
  }
  for (const auto& bar : series) {
    if (!(bar.close > 0.0)) {
      throw ValidationError("non-positive price on " + bar.date.iso());
    }
  }
  DatedSeries out;
  out.reserve(series.size() - horizon);
  for (std::size_t t = horizon; t < series.size(); ++t) {
    out.push_back({series[t].date, (series[t].close / series[t - horizon].close - 1.0) * 100.0});
  }
  return out;
}

DatedSeries rolling_volatility(const DatedSeries& returns, int window) {
  if (window < 2) throw ValidationError("volatility window must be >= 2");
  const auto n = static_cast<std::size_t>(window);
  if (returns.size() < n) {
    throw ValidationError("volatility window " + std::to_string(window) + " longer than the " +
                          std::to_string(returns.size()) + " available returns");
  }
  DatedSeries out;
  out.reserve(returns.size() - n + 1);
  for (std::size_t end = n; end <= returns.size(); ++end) {
    // Two passes per window so a common offset in the returns cancels exactly
    // in the deviations.
    double mean = 0.0;
    for (std::size_t i = end - n; i < end; ++i) mean += returns[i].value;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = end - n; i < end; ++i) {
      const double d = returns[i].value - mean;
      ss += d * d;
    }
    out.push_back({returns[end - 1].date, std::sqrt(ss / static_cast<double>(n - 1))});
  }
  return out;
}

LogVolatility log_volatility(const DatedSeries& volatility) {
  LogVolatility out;
  out.values.reserve(volatility.size());
  for (const auto& v : volatility) {
    if (v.value < 0.0 || std::isnan(v.value)) {
      throw ValidationError("negative volatility on " + v.date.iso());
    }
    if (v.value == 0.0) {
      ++out.dropped_zero;
      continue;
    }
    out.values.push_back({v.date, std::log(v.value)});
  }
  return out;
}

MinMaxScaler MinMaxScaler::fit(std::span<const double> train) {
  if (train.empty()) throw ValidationError("cannot fit a scaler on an empty training slice");
  const auto [lo, hi] = std::minmax_element(train.begin(), train.end());
  return MinMaxScaler{*lo, *hi};
}

double MinMaxScaler::transform(double x) const {
  if (degenerate()) return 0.0;
  return (x - lo) / (hi - lo);
}

double MinMaxScaler::inverse(double scaled) const {
  if (degenerate()) return lo;
  return lo + scaled * (hi - lo);
}

std::pair<std::vector<double>, MinMaxScaler> minmax_fit_transform(std::span<const double> train,
                                                                  std::span<const double> apply_to) {
  const auto scaler = MinMaxScaler::fit(train);
  std::vector<double> out;
  out.reserve(apply_to.size());
  for (double x : apply_to) out.push_back(scaler.transform(x));
  return {std::move(out), scaler};
}

FeatureFrame build_feature_frame(const ingest::PriceSeries& series, const FeatureConfig& config) {
  config.validate();
  FeatureFrame frame;
  frame.rows.resize(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    frame.rows[i].date = series[i].date;
    frame.rows[i].close = series[i].close;
  }

  if (series.size() > static_cast<std::size_t>(config.momentum_period)) {
    const auto mom = momentum(series, config.momentum_period);
    for (std::size_t k = 0; k < mom.size(); ++k) {
      frame.rows[config.momentum_period + k].momentum = mom[k].value;
    }
  }
  if (series.size() <= static_cast<std::size_t>(config.return_horizon)) {
    return frame;
  }
  const auto rets = returns_pct(series, config.return_horizon);
  for (std::size_t k = 0; k < rets.size(); ++k) {
    frame.rows[config.return_horizon + k].return_pct = rets[k].value;
  }
  if (rets.size() < static_cast<std::size_t>(config.volatility_window)) {
    return frame;
  }
  const auto vol = rolling_volatility(rets, config.volatility_window);
  const std::size_t vol_offset = config.return_horizon + config.volatility_window - 1;
  for (std::size_t k = 0; k < vol.size(); ++k) {
    auto& row = frame.rows[vol_offset + k];
    row.volatility = vol[k].value;
    if (vol[k].value > 0.0) {
      row.log_volatility = std::log(vol[k].value);
    } else {
      ++frame.zero_volatility_days;
    }
  }
  return frame;
}

void write_feature_csv(std::ostream& out, const FeatureFrame& frame) {
  auto cell = [](const std::optional<double>& v) {
    return v ? text::format_sig(*v) : std::string();
  };
  out << "date,close,return_pct,momentum,volatility,log_volatility\n";
  for (const auto& r : frame.rows) {
    out << r.date.iso() << ',' << text::format_sig(r.close) << ',' << cell(r.return_pct) << ','
        << cell(r.momentum) << ',' << cell(r.volatility) << ',' << cell(r.log_volatility) << '\n';
  }
}

}  // namespace causal_calib::features
