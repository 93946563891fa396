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

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace causal_calib {

/// Calendar day without time zone. Text form is ISO-8601 `YYYY-MM-DD`.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::sys_days days) : days_(days) {}
  Date(int year, unsigned month, unsigned day);

  /// Throws ValidationError on anything but a valid `YYYY-MM-DD`.
  static Date parse(std::string_view text);

  std::string iso() const;
  std::chrono::sys_days days() const { return days_; }
  std::chrono::weekday weekday() const { return std::chrono::weekday{days_}; }
  Date plus_days(int n) const { return Date{days_ + std::chrono::days{n}}; }

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace causal_calib
