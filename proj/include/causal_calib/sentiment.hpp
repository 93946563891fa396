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
#include <span>
#include <vector>

#include "causal_calib/date.hpp"
#include "causal_calib/ingest.hpp"

namespace causal_calib::sentiment {

/// Mean record score for one calendar day with at least one record.
struct DailySentiment {
  Date date;
  double score = 0.0;
  std::size_t count = 0;
};

/// -1 * p_neg + 0 * p_neu + 1 * p_pos.
double record_score(const ingest::SentimentRecord& r);

/// Per-day mean of record scores, sorted by date. Days without records are
/// absent rather than zero.
std::vector<DailySentiment> aggregate_daily(std::span<const ingest::SentimentRecord> records);

/// `date,score,count`.
void write_daily_csv(std::ostream& out, std::span<const DailySentiment> days);

/// `date,p_neg,p_neu,p_pos,score,text` for debugging the scorer.
void write_record_dump(std::ostream& out, std::span<const ingest::SentimentRecord> records);

}  // namespace causal_calib::sentiment
