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
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "causal_calib/date.hpp"
#include "causal_calib/ingest.hpp"

namespace causal_calib::features {

struct FeatureConfig {
  int momentum_period = 14;
  int return_horizon = 1;
  int volatility_window = 21;

  void validate() const;
};

struct DatedValue {
  Date date;
  double value = 0.0;
};

using DatedSeries = std::vector<DatedValue>;

/// P_t - P_{t-n}, dated at t. The first n bars have no value.
DatedSeries momentum(const ingest::PriceSeries& series, int n);

/// (P_t / P_{t-h} - 1) * 100, dated at t.
DatedSeries returns_pct(const ingest::PriceSeries& series, int horizon);

/// Sample standard deviation (divisor N-1) of the trailing `window`
/// returns, dated at the window's last entry.
DatedSeries rolling_volatility(const DatedSeries& returns, int window);

struct LogVolatility {
  DatedSeries values;
  std::size_t dropped_zero = 0;  ///< days with volatility exactly 0
};

/// ln(volatility) where volatility > 0; zero days are skipped and counted.
LogVolatility log_volatility(const DatedSeries& volatility);

/// Min-max scaler fit on a training slice. A degenerate range (hi == lo)
/// maps every input to 0 and inverts to lo.
struct MinMaxScaler {
  double lo = 0.0;
  double hi = 1.0;

  static MinMaxScaler fit(std::span<const double> train);
  double transform(double x) const;
  double inverse(double scaled) const;
  bool degenerate() const { return hi == lo; }
};

std::pair<std::vector<double>, MinMaxScaler> minmax_fit_transform(std::span<const double> train,
                                                                  std::span<const double> apply_to);

/// One output row per price bar; warm-up cells are empty.
struct FeatureRow {
  Date date;
  double close = 0.0;
  std::optional<double> return_pct;
  std::optional<double> momentum;
  std::optional<double> volatility;
  std::optional<double> log_volatility;
};

struct FeatureFrame {
  std::vector<FeatureRow> rows;
  std::size_t zero_volatility_days = 0;
};

FeatureFrame build_feature_frame(const ingest::PriceSeries& series, const FeatureConfig& config);

/// `date,close,return_pct,momentum,volatility,log_volatility`.
void write_feature_csv(std::ostream& out, const FeatureFrame& frame);

}  // namespace causal_calib::features
