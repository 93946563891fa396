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
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace causal_calib::text {

/// Significant digits used for every number in JSON reports.
inline constexpr int kReportDigits = 10;

/// Locale-independent `%.{digits}g`-style formatting.
std::string format_sig(double value, int digits = kReportDigits);

/// Shortest text that parses back to exactly `value`.
std::string format_exact(double value);

/// Rounds to `digits` significant digits (the value `format_sig` prints).
double round_sig(double value, int digits = kReportDigits);

/// Strict decimal parse: whole field, finite, no locale. Returns nullopt on
/// failure so callers can report line and column.
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv(std::string_view line);

/// Quotes a field if it contains a comma, quote or leading/trailing space.
std::string csv_escape(std::string_view field);

std::string_view trim(std::string_view s);

/// Strips UTF-8 BOM and trailing CR.
std::string_view clean_line(std::string_view line);

/// Copy of `j` with every floating-point number rounded to
/// `kReportDigits` significant digits.
nlohmann::json rounded(const nlohmann::json& j);

/// `rounded(j).dump(2)` plus a trailing newline.
std::string dump_report(const nlohmann::json& j);

}  // namespace causal_calib::text
