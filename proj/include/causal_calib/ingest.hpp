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

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "causal_calib/date.hpp"
#include "causal_calib/error.hpp"

namespace causal_calib::ingest {

/// One daily OHLCV row.
struct PriceBar {
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double volume = 0.0;
};

using PriceSeries = std::vector<PriceBar>;

/// Sentiment-model output for one news item. Only the probabilities carry
/// meaning downstream; `text` is kept for debugging dumps.
struct SentimentRecord {
  Date date;
  double p_neg = 0.0;
  double p_neu = 0.0;
  double p_pos = 0.0;
  std::string text;
};

inline constexpr double kProbabilitySumTolerance = 1e-3;

enum class AlignmentPolicy { kNextTradingDay, kPreviousTradingDay, kDrop };

AlignmentPolicy parse_alignment_policy(std::string_view name);
std::string_view to_string(AlignmentPolicy policy);

/// Checks the OHLCV invariants; `where` prefixes the message.
void validate_price_bar(const PriceBar& bar, std::string_view where);

/// Checks the probability-triple invariants; `where` prefixes the message.
void validate_sentiment_record(const SentimentRecord& r, std::string_view where);

/// Reads `date,open,high,low,close,volume`. Rejects malformed rows (line
/// number in the message), empty numeric cells, non-finite values, and
/// dates that are duplicated or out of order.
PriceSeries read_price_csv(const std::filesystem::path& path);
PriceSeries parse_price_csv(std::istream& in, std::string_view source);
void write_price_csv(std::ostream& out, const PriceSeries& series);

/// CSV with header `date,p_neg,p_neu,p_pos[,text]`, or JSONL objects with
/// the same keys. Format is chosen by a `.jsonl`/`.json` extension, else by
/// a leading `{` on the first non-empty line.
std::vector<SentimentRecord> read_sentiment_file(const std::filesystem::path& path);
std::vector<SentimentRecord> parse_sentiment_csv(std::istream& in, std::string_view source);
std::vector<SentimentRecord> parse_sentiment_jsonl(std::istream& in, std::string_view source);

/// Dates from the first column of any CSV whose first header cell is
/// `date` (a price file or a bare date list). Must be strictly increasing.
std::vector<Date> read_calendar(const std::filesystem::path& path);

/// Moves each event onto the trading calendar.
///
/// Events already on a trading day are left alone. Otherwise
/// next-trading-day moves them to the first later calendar date,
/// previous-trading-day to the last earlier one, and drop removes them.
/// Relative order of the events is preserved (stable).
template <class Record>
std::vector<Record> align_dates(std::vector<Record> events, std::span<const Date> calendar,
                                AlignmentPolicy policy) {
  for (std::size_t i = 1; i < calendar.size(); ++i) {
    if (!(calendar[i - 1] < calendar[i])) {
      throw ValidationError("calendar dates must be strictly increasing (at " + calendar[i].iso() +
                            ")");
    }
  }
  std::vector<Record> out;
  out.reserve(events.size());
  for (auto& e : events) {
    auto it = std::lower_bound(calendar.begin(), calendar.end(), e.date);
    if (it != calendar.end() && *it == e.date) {
      out.push_back(std::move(e));
      continue;
    }
    switch (policy) {
      case AlignmentPolicy::kDrop:
        break;
      case AlignmentPolicy::kNextTradingDay:
        if (it == calendar.end()) {
          throw ValidationError("event on " + e.date.iso() +
                                " is after the last calendar date; cannot move to next trading day");
        }
        e.date = *it;
        out.push_back(std::move(e));
        break;
      case AlignmentPolicy::kPreviousTradingDay:
        if (it == calendar.begin()) {
          throw ValidationError("event on " + e.date.iso() +
                                " is before the first calendar date; cannot move to previous trading day");
        }
        e.date = *std::prev(it);
        out.push_back(std::move(e));
        break;
    }
  }
  return out;
}

}  // namespace causal_calib::ingest
