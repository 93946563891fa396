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

#include "causal_calib/sentiment.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "causal_calib/text.hpp"

namespace causal_calib::sentiment {

double record_score(const ingest::SentimentRecord& r) {
  return -1.0 * r.p_neg + 0.0 * r.p_neu + 1.0 * r.p_pos;
}

std::vector<DailySentiment> aggregate_daily(std::span<const ingest::SentimentRecord> records) {
  // Each day's scores are summed in ascending order so the aggregate does
  // not depend on record order at the last bit.
  std::map<Date, std::vector<double>> by_day;
  for (const auto& r : records) by_day[r.date].push_back(record_score(r));
  std::vector<DailySentiment> out;
  out.reserve(by_day.size());
  for (auto& [date, scores] : by_day) {
    std::sort(scores.begin(), scores.end());
    double sum = 0.0;
    for (double s : scores) sum += s;
    const double mean = sum / static_cast<double>(scores.size());
    out.push_back({date, std::clamp(mean, -1.0, 1.0), scores.size()});
  }
  return out;
}

void write_daily_csv(std::ostream& out, std::span<const DailySentiment> days) {
  out << "date,score,count\n";
  for (const auto& d : days) {
    out << d.date.iso() << ',' << text::format_sig(d.score) << ',' << d.count << '\n';
  }
}

void write_record_dump(std::ostream& out, std::span<const ingest::SentimentRecord> records) {
  out << "date,p_neg,p_neu,p_pos,score,text\n";
  for (const auto& r : records) {
    out << r.date.iso() << ',' << text::format_sig(r.p_neg) << ',' << text::format_sig(r.p_neu)
        << ',' << text::format_sig(r.p_pos) << ',' << text::format_sig(record_score(r)) << ','
        << text::csv_escape(r.text) << '\n';
  }
}

}  // namespace causal_calib::sentiment
