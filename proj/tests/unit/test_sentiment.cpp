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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "causal_calib/random.hpp"
#include "causal_calib/sentiment.hpp"

using namespace causal_calib;
using namespace causal_calib::sentiment;
using ingest::SentimentRecord;

namespace {

SentimentRecord rec(const char* date, double neg, double neu, double pos) {
  return {Date::parse(date), neg, neu, pos, ""};
}

/// A triple with the given score: p_pos - p_neg = s.
SentimentRecord with_score(const char* date, double s) {
  return s >= 0 ? rec(date, 0, 1 - s, s) : rec(date, -s, 1 + s, 0);
}

}  // namespace

TEST_SUITE("sentiment") {

TEST_CASE("record score examples") {
  CHECK(record_score(rec("2023-03-10", 0, 0, 1)) == 1.0);
  CHECK(record_score(rec("2023-03-10", 1, 0, 0)) == -1.0);
  const double s = record_score(rec("2023-03-10", 0.9373965, 0.04212248, 0.02048101));
  CHECK(std::abs(s - (-0.9373965 + 0.02048101)) <= 1e-15);
  CHECK(std::abs(s - (-0.91692)) <= 1e-5);
}

TEST_CASE("daily aggregation examples") {
  std::vector<SentimentRecord> r{with_score("2023-03-10", 1), with_score("2023-03-10", -1)};
  auto d = aggregate_daily(r);
  REQUIRE(d.size() == 1);
  CHECK(d[0].score == 0.0);
  CHECK(d[0].count == 2);

  std::vector<SentimentRecord> one{with_score("2023-03-10", 1)};
  CHECK(aggregate_daily(one)[0].score == 1.0);

  std::vector<SentimentRecord> three{with_score("2023-03-10", 0.5), with_score("2023-03-10", 0.5),
                                     with_score("2023-03-10", -0.4)};
  CHECK(aggregate_daily(three)[0].score == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("aggregation is permutation invariant, bounded and per-day") {
  SplitMix64 rng(21);
  const char* days[] = {"2023-03-01", "2023-03-02", "2023-03-03", "2023-03-06"};
  std::vector<SentimentRecord> r;
  for (int i = 0; i < 200; ++i) {
    double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
    const double t = a + b + c;
    r.push_back(rec(days[rng.below(4)], a / t, b / t, c / t));
  }
  auto base = aggregate_daily(r);
  REQUIRE(base.size() == 4);
  CHECK(std::is_sorted(base.begin(), base.end(),
                       [](const auto& x, const auto& y) { return x.date < y.date; }));

  auto shuffled = r;
  for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
    std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
  }
  auto perm = aggregate_daily(shuffled);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(perm[i].score == doctest::Approx(base[i].score).epsilon(1e-12));
    CHECK(perm[i].count == base[i].count);
  }

  for (const auto& day : base) {
    double worst = 0;
    for (const auto& x : r) {
      if (x.date == day.date) worst = std::max(worst, std::abs(record_score(x)));
    }
    CHECK(std::abs(day.score) <= worst + 1e-15);
  }

  std::vector<SentimentRecord> first, second;
  for (const auto& x : r) (x.date.iso() < "2023-03-03" ? first : second).push_back(x);
  auto a = aggregate_daily(first);
  auto b = aggregate_daily(second);
  REQUIRE(a.size() + b.size() == base.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].score == base[i].score);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i].score == base[a.size() + i].score);
}

TEST_CASE("daily CSV layout") {
  std::vector<DailySentiment> d{{Date::parse("2023-03-10"), 0.25, 2}};
  std::ostringstream out;
  write_daily_csv(out, d);
  CHECK(out.str() == "date,score,count\n2023-03-10,0.25,2\n");
}

}  // TEST_SUITE
