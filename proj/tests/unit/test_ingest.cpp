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
#include <functional>
#include <sstream>
#include <vector>

#include "causal_calib/ingest.hpp"
#include "causal_calib/random.hpp"
#include "testing.hpp"

using namespace causal_calib;
using namespace causal_calib::ingest;

namespace {

PriceSeries parse_prices(const std::string& body) {
  std::istringstream in("date,open,high,low,close,volume\n" + body);
  return parse_price_csv(in, "prices.csv");
}

struct Event {
  Date date;
  int id = 0;
};

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("price row maps fields") {
  auto s = parse_prices("2023-05-03,170.0,171.0,169.5,170.5,1000\n");
  REQUIRE(s.size() == 1);
  CHECK(s[0].date.iso() == "2023-05-03");
  CHECK(s[0].close == 170.5);
  CHECK(s[0].volume == 1000.0);
}

TEST_CASE("header-only price file is empty") {
  CHECK(parse_prices("").empty());
}

TEST_CASE("negative volume is rejected") {
  const auto msg = error_of([] { parse_prices("2023-05-03,170.0,171.0,169.5,170.5,-1\n"); });
  CHECK(msg.find("non-negative volume violated") != std::string::npos);
}

TEST_CASE("malformed price rows report the line") {
  const auto msg = error_of([] {
    parse_prices("2023-05-03,170.0,171.0,169.5,170.5,1000\n2023-05-04,1,2,3\n");
  });
  CHECK(msg.find("prices.csv:3") != std::string::npos);
  CHECK_THROWS_AS(parse_prices("2023-05-03,170.0,171.0,169.5,,1000\n"), ValidationError);
  CHECK_THROWS_AS(parse_prices("2023-05-03,170.0,171.0,169.5,inf,1000\n"), ValidationError);
  CHECK_THROWS_AS(parse_prices("2023-05-03,1,1,1,1,1\n2023-05-03,1,1,1,1,1\n"), ValidationError);
  CHECK_THROWS_AS(parse_prices("2023-05-04,1,1,1,1,1\n2023-05-03,1,1,1,1,1\n"), ValidationError);
  CHECK_THROWS_AS(read_price_csv("/nonexistent/prices.csv"), IoError);
}

TEST_CASE("price CSV round-trips exactly") {
  SplitMix64 rng(11);
  PriceSeries s;
  Date d(2021, 1, 4);
  for (int i = 0; i < 50; ++i) {
    PriceBar b;
    b.date = d.plus_days(i);
    b.open = rng.uniform(50, 150);
    b.close = rng.uniform(50, 150);
    b.high = std::max(b.open, b.close) + rng.uniform();
    b.low = std::min(b.open, b.close) - rng.uniform();
    b.volume = static_cast<double>(rng.below(1000000));
    s.push_back(b);
  }
  std::ostringstream out;
  write_price_csv(out, s);
  std::istringstream in(out.str());
  auto back = parse_price_csv(in, "rt");
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back[i].date == s[i].date);
    CHECK(back[i].open == s[i].open);
    CHECK(back[i].high == s[i].high);
    CHECK(back[i].low == s[i].low);
    CHECK(back[i].close == s[i].close);
    CHECK(back[i].volume == s[i].volume);
  }
}

TEST_CASE("sentiment CSV rows are validated") {
  std::istringstream ok("date,p_neg,p_neu,p_pos\n2023-03-10,0.9373965,0.04212248,0.02048101\n");
  auto r = parse_sentiment_csv(ok, "news.csv");
  REQUIRE(r.size() == 1);
  CHECK(r[0].p_neg == doctest::Approx(0.9374).epsilon(1e-4));

  std::istringstream vertex("date,p_neg,p_neu,p_pos\n2023-03-10,1,0,0\n");
  CHECK(parse_sentiment_csv(vertex, "v").size() == 1);

  std::istringstream bad("date,p_neg,p_neu,p_pos\n2023-03-10,0.5,0.5,0.5\n");
  const auto msg = error_of([&] { parse_sentiment_csv(bad, "b"); });
  CHECK(msg.find("probabilities do not sum to 1") != std::string::npos);

  std::istringstream neg("date,p_neg,p_neu,p_pos\n2023-03-10,-0.1,0.6,0.5\n");
  CHECK_THROWS_AS(parse_sentiment_csv(neg, "n"), ValidationError);
}

TEST_CASE("sentiment columns are matched by name") {
  std::istringstream in("date,p_pos,p_neg,p_neu,text\n2023-03-10,0.1,0.7,0.2,\"hi, there\"\n");
  auto r = parse_sentiment_csv(in, "n");
  REQUIRE(r.size() == 1);
  CHECK(r[0].p_neg == 0.7);
  CHECK(r[0].p_pos == 0.1);
  CHECK(r[0].text == "hi, there");
}

TEST_CASE("sentiment JSONL") {
  std::istringstream in(
      "{\"date\":\"2023-03-10\",\"p_neg\":0.2,\"p_neu\":0.3,\"p_pos\":0.5,\"text\":\"x\"}\n\n"
      "{\"date\":\"2023-03-11\",\"p_neg\":1,\"p_neu\":0,\"p_pos\":0}\n");
  auto r = parse_sentiment_jsonl(in, "n.jsonl");
  REQUIRE(r.size() == 2);
  CHECK(r[1].date.iso() == "2023-03-11");
  std::istringstream bad("{\"date\":\"2023-03-10\",\"p_neg\":0.2}\n");
  CHECK_THROWS_AS(parse_sentiment_jsonl(bad, "b"), ValidationError);
}

TEST_CASE("align_dates policies") {
  // Friday 2023-03-10, Saturday 11, Monday 13.
  const std::vector<Date> cal{Date::parse("2023-03-09"), Date::parse("2023-03-10"),
                              Date::parse("2023-03-13")};
  std::vector<Event> ev{{Date::parse("2023-03-11"), 1}, {Date::parse("2023-03-10"), 2}};

  auto next = align_dates(ev, cal, AlignmentPolicy::kNextTradingDay);
  REQUIRE(next.size() == 2);
  CHECK(next[0].date.iso() == "2023-03-13");
  CHECK(next[1].date.iso() == "2023-03-10");

  auto prev = align_dates(ev, cal, AlignmentPolicy::kPreviousTradingDay);
  CHECK(prev[0].date.iso() == "2023-03-10");

  auto drop = align_dates(ev, cal, AlignmentPolicy::kDrop);
  REQUIRE(drop.size() == 1);
  CHECK(drop[0].id == 2);

  std::vector<Event> late{{Date::parse("2023-03-14"), 3}};
  CHECK_THROWS_AS(align_dates(late, cal, AlignmentPolicy::kNextTradingDay), ValidationError);
  std::vector<Event> early{{Date::parse("2023-03-01"), 4}};
  CHECK_THROWS_AS(align_dates(early, cal, AlignmentPolicy::kPreviousTradingDay), ValidationError);
  const std::vector<Date> unsorted{cal[1], cal[0]};
  CHECK_THROWS_AS(align_dates(ev, unsorted, AlignmentPolicy::kDrop), ValidationError);
}

TEST_CASE("align_dates is idempotent and keeps calendar membership") {
  SplitMix64 rng(5);
  std::vector<Date> cal;
  Date d(2022, 1, 3);
  for (int i = 0; i < 200; ++i) {
    if (rng.uniform() < 0.7) cal.push_back(d.plus_days(i));
  }
  for (auto policy : {AlignmentPolicy::kNextTradingDay, AlignmentPolicy::kPreviousTradingDay,
                      AlignmentPolicy::kDrop}) {
    std::vector<Event> ev;
    for (int i = 0; i < 300; ++i) {
      ev.push_back({cal.front().plus_days(static_cast<int>(rng.below(
                        static_cast<std::uint64_t>((cal.back().days() - cal.front().days()).count())))),
                    i});
    }
    auto once = align_dates(ev, cal, policy);
    auto twice = align_dates(once, cal, policy);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      CHECK(once[i].date == twice[i].date);
      CHECK(once[i].id == twice[i].id);
      CHECK(std::binary_search(cal.begin(), cal.end(), once[i].date));
    }
  }
}

TEST_CASE("calendar from a price file or a date list") {
  cc_test::TempDir dir("cal");
  cc_test::write_file(dir / "c.csv", "date\n2023-01-02\n2023-01-03\n");
  auto cal = read_calendar(dir / "c.csv");
  REQUIRE(cal.size() == 2);
  cc_test::write_file(dir / "bad.csv", "date\n2023-01-03\n2023-01-02\n");
  CHECK_THROWS_AS(read_calendar(dir / "bad.csv"), ValidationError);
  CHECK(parse_alignment_policy("next") == AlignmentPolicy::kNextTradingDay);
  CHECK_THROWS_AS(parse_alignment_policy("sideways"), ValidationError);
}

}  // TEST_SUITE
