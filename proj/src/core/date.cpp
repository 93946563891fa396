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

#include "causal_calib/date.hpp"

#include <charconv>
#include <cstdio>

#include "causal_calib/error.hpp"

namespace causal_calib {

using namespace std::chrono;

Date::Date(int y, unsigned m, unsigned d) {
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) {
    throw ValidationError("invalid calendar date");
  }
  days_ = sys_days{ymd};
}

Date Date::parse(std::string_view text) {
  auto fail = [&]() -> Date {
    throw ValidationError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return fail();
  }
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  auto field = [&](std::size_t pos, std::size_t len, auto& out) {
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return false;
    }
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && p == text.data() + pos + len;
  };
  if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) {
    return fail();
  }
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) {
    return fail();
  }
  return Date{sys_days{ymd}};
}

std::string Date::iso() const {
  const year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace causal_calib
