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
#include <limits>

#include "causal_calib/date.hpp"
#include "causal_calib/error.hpp"
#include "causal_calib/random.hpp"
#include "causal_calib/text.hpp"

using namespace causal_calib;

TEST_SUITE("text") {

TEST_CASE("format_exact round-trips doubles") {
  SplitMix64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.below(200)) - 100);
    const auto back = text::parse_double(text::format_exact(v));
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
  CHECK(text::format_exact(0.1) == "0.1");
  CHECK(text::format_exact(170.5) == "170.5");
}

TEST_CASE("format_sig uses ten significant digits") {
  CHECK(text::format_sig(1.0 / 3.0) == "0.3333333333");
  CHECK(text::format_sig(2.0) == "2");
  CHECK(text::round_sig(0.123456789012345) == doctest::Approx(0.1234567890).epsilon(1e-15));
}

TEST_CASE("parse_double is strict") {
  CHECK(text::parse_double("1.5") == 1.5);
  CHECK(text::parse_double("-2e3") == -2000.0);
  CHECK_FALSE(text::parse_double("").has_value());
  CHECK_FALSE(text::parse_double("1.5x").has_value());
  CHECK_FALSE(text::parse_double("nan").has_value());
  CHECK_FALSE(text::parse_double("inf").has_value());
  CHECK(text::parse_int("42") == 42);
  CHECK_FALSE(text::parse_int("4.2").has_value());
}

TEST_CASE("split_csv handles quoting") {
  auto f = text::split_csv(R"(a,"b,c","d ""e""",)");
  REQUIRE(f.size() == 4);
  CHECK(f[0] == "a");
  CHECK(f[1] == "b,c");
  CHECK(f[2] == "d \"e\"");
  CHECK(f[3] == "");
  CHECK(text::split_csv(text::csv_escape("x, \"y\""))[0] == "x, \"y\"");
}

TEST_CASE("clean_line strips BOM and CR") {
  CHECK(text::clean_line("\xEF\xBB\xBF" "date,x\r") == "date,x");
  CHECK(text::trim("  a b \t") == "a b");
}

TEST_CASE("dump_report rounds floats and keeps integers") {
  nlohmann::json j = {{"a", 1.0 / 3.0}, {"n", 5}, {"v", {0.1, 2.5}}};
  const std::string s = text::dump_report(j);
  CHECK(s.find("0.3333333333") != std::string::npos);
  CHECK(s.find("0.33333333333") == std::string::npos);
  CHECK(s.find("\"n\": 5") != std::string::npos);
  CHECK(s.back() == '\n');
}

TEST_CASE("Date parses and prints ISO dates") {
  const Date d = Date::parse("2023-03-11");
  CHECK(d.iso() == "2023-03-11");
  CHECK(d.weekday() == std::chrono::Saturday);
  CHECK(d.plus_days(2).iso() == "2023-03-13");
  CHECK(Date(2024, 2, 29).iso() == "2024-02-29");
  CHECK_THROWS_AS(Date::parse("2023-02-30"), ValidationError);
  CHECK_THROWS_AS(Date::parse("2023-3-1"), ValidationError);
  CHECK_THROWS_AS(Date::parse("20230301"), ValidationError);
  CHECK(Date::parse("2023-01-01") < Date::parse("2023-01-02"));
}

TEST_CASE("SplitMix64 matches the reference sequence") {
  // First outputs for seed 1234567 from the reference C implementation.
  SplitMix64 rng(1234567);
  CHECK(rng.next_u64() == 6457827717110365317ULL);
  CHECK(rng.next_u64() == 3203168211198807973ULL);
  CHECK(rng.next_u64() == 9817491932198370423ULL);
}

TEST_CASE("SplitMix64 uniform and below stay in range") {
  SplitMix64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(rng.below(7) < 7u);
  }
  SplitMix64 a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
}

}  // TEST_SUITE
