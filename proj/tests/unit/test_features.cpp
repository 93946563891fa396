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
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "causal_calib/error.hpp"
#include "causal_calib/features.hpp"
#include "causal_calib/random.hpp"

using namespace causal_calib;
using namespace causal_calib::features;

namespace {

ingest::PriceSeries closes(const std::vector<double>& c) {
  ingest::PriceSeries s;
  Date d(2023, 1, 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    ingest::PriceBar b;
    b.date = d.plus_days(static_cast<int>(i));
    b.open = b.high = b.low = b.close = c[i];
    b.volume = 1;
    s.push_back(b);
  }
  return s;
}

DatedSeries dated(const std::vector<double>& v) {
  DatedSeries s;
  Date d(2023, 1, 2);
  for (std::size_t i = 0; i < v.size(); ++i) s.push_back({d.plus_days(static_cast<int>(i)), v[i]});
  return s;
}

std::vector<double> values(const DatedSeries& s) {
  std::vector<double> v;
  for (const auto& e : s) v.push_back(e.value);
  return v;
}

}  // namespace

TEST_SUITE("features") {

TEST_CASE("momentum examples") {
  CHECK(values(momentum(closes({100, 102, 105}), 1)) == std::vector<double>{2, 3});
  CHECK(values(momentum(closes({8, 10}), 1)) == std::vector<double>{2});
  for (double v : values(momentum(closes({7, 7, 7, 7, 7}), 3))) CHECK(v == 0.0);
  CHECK(momentum(closes({100, 102, 105}), 1)[0].date == Date(2023, 1, 3));
  CHECK_THROWS_AS(momentum(closes({1, 2}), 2), ValidationError);
  CHECK_THROWS_AS(momentum(closes({1, 2}), 0), ValidationError);
}

TEST_CASE("momentum plus the lagged price reconstructs the price") {
  SplitMix64 rng(2);
  const int n = 7;
  // Within a factor of two the subtraction is exact (Sterbenz), so the
  // reconstruction is too; in general it is exact up to one rounding.
  std::vector<double> narrow, wide;
  for (int i = 0; i < 100; ++i) {
    narrow.push_back(rng.uniform(100, 199.99));
    wide.push_back(rng.uniform(1, 1000));
  }
  auto m = momentum(closes(narrow), n);
  REQUIRE(m.size() == narrow.size() - n);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i].value + narrow[i] == narrow[i + n]);
  auto w = momentum(closes(wide), n);
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(std::abs(w[i].value + wide[i] - wide[i + n]) <= 1e-15 * wide[i + n] * 4);
  }
}

TEST_CASE("returns examples") {
  CHECK(values(returns_pct(closes({100, 110}), 1))[0] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(values(returns_pct(closes({100, 95}), 1))[0] == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(values(returns_pct(closes({100, 100}), 1))[0] == 0.0);
  CHECK(values(returns_pct(closes({100, 0.5, 110}), 2))[0] == doctest::Approx(10.0).epsilon(1e-12));
  auto bad = closes({100, 100});
  bad[1].close = 0;
  CHECK_THROWS_AS(returns_pct(bad, 1), ValidationError);
}

TEST_CASE("rolling volatility examples") {
  for (double v : values(rolling_volatility(dated({1, 1, 1, 1}), 4))) CHECK(v == 0.0);
  auto two = values(rolling_volatility(dated({0, 2}), 2));
  REQUIRE(two.size() == 1);
  CHECK(two[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  for (double v : values(rolling_volatility(dated({-1, 1, -1, 1}), 2))) {
    CHECK(v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rolling_volatility(dated({1, 2, 3}), 1), ValidationError);
  CHECK_THROWS_AS(rolling_volatility(dated({1, 2, 3}), 4), ValidationError);
}

TEST_CASE("volatility is shift-invariant within a window") {
  SplitMix64 rng(4);
  std::vector<double> r;
  for (int i = 0; i < 80; ++i) r.push_back(rng.normal());
  auto base = values(rolling_volatility(dated(r), 21));
  for (double shift : {-3.0, 0.5, 12.0}) {
    std::vector<double> s = r;
    for (double& v : s) v += shift;
    auto moved = values(rolling_volatility(dated(s), 21));
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(std::abs(moved[i] - base[i]) <= 1e-10);
  }
}

TEST_CASE("rolling volatility matches a two-pass oracle") {
  SplitMix64 rng(8);
  std::vector<double> r;
  for (int i = 0; i < 60; ++i) r.push_back(rng.normal(0.1, 2.0));
  const int n = 9;
  auto got = values(rolling_volatility(dated(r), n));
  for (std::size_t t = 0; t < got.size(); ++t) {
    double mean = 0;
    for (int j = 0; j < n; ++j) mean += r[t + j];
    mean /= n;
    double ss = 0;
    for (int j = 0; j < n; ++j) ss += (r[t + j] - mean) * (r[t + j] - mean);
    CHECK(got[t] == doctest::Approx(std::sqrt(ss / (n - 1))).epsilon(1e-12));
  }
}

TEST_CASE("log volatility") {
  auto lv = log_volatility(dated({std::numbers::e, 1.0, 0.0, 2.0}));
  REQUIRE(lv.values.size() == 3);
  CHECK(lv.values[0].value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lv.values[1].value == 0.0);
  CHECK(lv.dropped_zero == 1);
  CHECK(lv.values[2].date == Date(2023, 1, 5));
  CHECK_THROWS_AS(log_volatility(dated({1.0, -0.1})), ValidationError);
}

TEST_CASE("min-max scaler") {
  const std::vector<double> train{0, 10};
  auto [scaled, sc] = minmax_fit_transform(train, std::vector<double>{5, 10});
  CHECK(scaled[0] == 0.5);
  CHECK(scaled[1] == 1.0);
  auto [flat, fsc] = minmax_fit_transform(std::vector<double>{3, 3, 3}, std::vector<double>{3});
  CHECK(flat[0] == 0.0);
  CHECK(fsc.degenerate());
  CHECK(fsc.inverse(0.7) == 3.0);
  CHECK_THROWS_AS(MinMaxScaler::fit(std::vector<double>{}), ValidationError);
}

TEST_CASE("min-max inverse recovers the train range") {
  SplitMix64 rng(9);
  std::vector<double> train;
  for (int i = 0; i < 500; ++i) train.push_back(rng.uniform(-40, 300));
  auto sc = MinMaxScaler::fit(train);
  for (double x : train) {
    const double back = sc.inverse(sc.transform(x));
    CHECK(std::abs(back - x) <= 1e-12 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("feature frame keeps one row per bar") {
  SplitMix64 rng(10);
  std::vector<double> c{100};
  for (int i = 1; i < 100; ++i) c.push_back(c.back() * (1 + 0.01 * rng.normal()));
  FeatureConfig cfg;
  auto frame = build_feature_frame(closes(c), cfg);
  REQUIRE(frame.rows.size() == 100);
  CHECK_FALSE(frame.rows[0].return_pct.has_value());
  CHECK(frame.rows[1].return_pct.has_value());
  CHECK_FALSE(frame.rows[13].momentum.has_value());
  CHECK(frame.rows[14].momentum.has_value());
  CHECK_FALSE(frame.rows[20].volatility.has_value());
  CHECK(frame.rows[21].volatility.has_value());
  CHECK(*frame.rows[21].log_volatility == doctest::Approx(std::log(*frame.rows[21].volatility)));
  std::ostringstream out;
  write_feature_csv(out, frame);
  const std::string csv = out.str();
  CHECK(csv.rfind("date,close,return_pct,momentum,volatility,log_volatility\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 101);

  FeatureConfig bad;
  bad.volatility_window = 1;
  CHECK_THROWS_WITH_AS(bad.validate(), "volatility window must be >= 2", ValidationError);
}

}  // TEST_SUITE
