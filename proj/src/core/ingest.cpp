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

#include "causal_calib/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "causal_calib/text.hpp"

namespace causal_calib::ingest {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  return in;
}

std::string at(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

std::vector<std::string> lowercase_header(std::string_view line) {
  auto cells = text::split_csv(line);
  for (auto& c : cells) {
    c = std::string(text::trim(c));
    for (auto& ch : c) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return cells;
}

double number_cell(const std::vector<std::string>& cells, std::size_t col, std::string_view name,
                   const std::string& where) {
  const std::string_view cell = text::trim(cells[col]);
  if (cell.empty()) {
    throw ValidationError(where + "empty " + std::string(name) + " (missing values are not imputed)");
  }
  auto v = text::parse_double(cell);
  if (!v) {
    throw ValidationError(where + "invalid or non-finite " + std::string(name) + " '" +
                          std::string(cell) + "'");
  }
  return *v;
}

Date date_cell(const std::vector<std::string>& cells, const std::string& where) {
  try {
    return Date::parse(text::trim(cells[0]));
  } catch (const ValidationError& e) {
    throw ValidationError(where + e.what());
  }
}

}  // namespace

AlignmentPolicy parse_alignment_policy(std::string_view name) {
  if (name == "next" || name == "next-trading-day") return AlignmentPolicy::kNextTradingDay;
  if (name == "prev" || name == "previous-trading-day") return AlignmentPolicy::kPreviousTradingDay;
  if (name == "drop") return AlignmentPolicy::kDrop;
  throw ValidationError("unknown alignment policy '" + std::string(name) +
                        "' (allowed: next, prev, drop)");
}

std::string_view to_string(AlignmentPolicy policy) {
  switch (policy) {
    case AlignmentPolicy::kNextTradingDay:
      return "next-trading-day";
    case AlignmentPolicy::kPreviousTradingDay:
      return "previous-trading-day";
    case AlignmentPolicy::kDrop:
      return "drop";
  }
  return "?";
}

void validate_price_bar(const PriceBar& bar, std::string_view where) {
  const std::string w(where);
  for (double p : {bar.open, bar.high, bar.low, bar.close}) {
    if (!std::isfinite(p) || p <= 0.0) {
      throw ValidationError(w + "prices must be finite and > 0");
    }
  }
  if (!std::isfinite(bar.volume) || bar.volume < 0.0) {
    throw ValidationError(w + "non-negative volume violated");
  }
  if (bar.low > std::min(bar.open, bar.close)) {
    throw ValidationError(w + "low exceeds min(open, close)");
  }
  if (bar.high < std::max(bar.open, bar.close)) {
    throw ValidationError(w + "high below max(open, close)");
  }
}

void validate_sentiment_record(const SentimentRecord& r, std::string_view where) {
  const std::string w(where);
  for (double p : {r.p_neg, r.p_neu, r.p_pos}) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw ValidationError(w + "probability outside [0, 1]");
    }
  }
  if (std::abs(r.p_neg + r.p_neu + r.p_pos - 1.0) > kProbabilitySumTolerance) {
    throw ValidationError(w + "probabilities do not sum to 1");
  }
}

PriceSeries read_price_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_price_csv(in, path.string());
}

PriceSeries parse_price_csv(std::istream& in, std::string_view source) {
  static const std::vector<std::string> kHeader{"date", "open", "high", "low", "close", "volume"};
  PriceSeries out;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = text::clean_line(raw);
    if (text::trim(line).empty()) continue;
    if (!header_seen) {
      if (lowercase_header(line) != kHeader) {
        throw ValidationError(at(source, line_no) + "expected header 'date,open,high,low,close,volume'");
      }
      header_seen = true;
      continue;
    }
    const std::string where = at(source, line_no);
    const auto cells = text::split_csv(line);
    if (cells.size() != kHeader.size()) {
      throw ValidationError(where + "malformed row: expected 6 fields, got " +
                            std::to_string(cells.size()));
    }
    PriceBar bar;
    bar.date = date_cell(cells, where);
    bar.open = number_cell(cells, 1, "open", where);
    bar.high = number_cell(cells, 2, "high", where);
    bar.low = number_cell(cells, 3, "low", where);
    bar.close = number_cell(cells, 4, "close", where);
    bar.volume = number_cell(cells, 5, "volume", where);
    validate_price_bar(bar, where);
    if (!out.empty()) {
      if (bar.date == out.back().date) {
        throw ValidationError(where + "duplicate date " + bar.date.iso());
      }
      if (bar.date < out.back().date) {
        throw ValidationError(where + "dates must be increasing (" + bar.date.iso() + " after " +
                              out.back().date.iso() + ")");
      }
    }
    out.push_back(bar);
  }
  if (!header_seen) {
    throw ValidationError(std::string(source) + ": missing header row");
  }
  return out;
}

void write_price_csv(std::ostream& out, const PriceSeries& series) {
  out << "date,open,high,low,close,volume\n";
  for (const auto& b : series) {
    out << b.date.iso() << ',' << text::format_exact(b.open) << ',' << text::format_exact(b.high)
        << ',' << text::format_exact(b.low) << ',' << text::format_exact(b.close) << ','
        << text::format_exact(b.volume) << '\n';
  }
}

std::vector<SentimentRecord> parse_sentiment_csv(std::istream& in, std::string_view source) {
  std::vector<SentimentRecord> out;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool has_text = false;
  // Positions of date, p_neg, p_neu, p_pos, text (matched by name).
  std::array<std::size_t, 5> col{};
  std::size_t width = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = text::clean_line(raw);
    if (text::trim(line).empty()) continue;
    if (!header_seen) {
      const auto header = lowercase_header(line);
      const std::array<std::string, 5> names{"date", "p_neg", "p_neu", "p_pos", "text"};
      std::array<int, 5> found{-1, -1, -1, -1, -1};
      bool ok = header.size() == 4 || header.size() == 5;
      for (std::size_t i = 0; ok && i < header.size(); ++i) {
        const auto it = std::find(names.begin(), names.end(), header[i]);
        if (it == names.end() || found[static_cast<std::size_t>(it - names.begin())] >= 0) {
          ok = false;
        } else {
          found[static_cast<std::size_t>(it - names.begin())] = static_cast<int>(i);
        }
      }
      for (std::size_t k = 0; ok && k < 4; ++k) ok = found[k] >= 0;
      if (!ok) {
        throw ValidationError(at(source, line_no) +
                              "expected header columns date,p_neg,p_neu,p_pos[,text]");
      }
      has_text = found[4] >= 0;
      for (std::size_t k = 0; k < 5; ++k) col[k] = static_cast<std::size_t>(std::max(found[k], 0));
      width = header.size();
      header_seen = true;
      continue;
    }
    const std::string where = at(source, line_no);
    const auto cells = text::split_csv(line);
    if (cells.size() != width) {
      throw ValidationError(where + "malformed row: expected " + std::to_string(width) +
                            " fields, got " + std::to_string(cells.size()));
    }
    SentimentRecord r;
    try {
      r.date = Date::parse(text::trim(cells[col[0]]));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    r.p_neg = number_cell(cells, col[1], "p_neg", where);
    r.p_neu = number_cell(cells, col[2], "p_neu", where);
    r.p_pos = number_cell(cells, col[3], "p_pos", where);
    if (has_text) r.text = cells[col[4]];
    validate_sentiment_record(r, where);
    out.push_back(std::move(r));
  }
  if (!header_seen) {
    throw ValidationError(std::string(source) + ": missing header row");
  }
  return out;
}

std::vector<SentimentRecord> parse_sentiment_jsonl(std::istream& in, std::string_view source) {
  std::vector<SentimentRecord> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = text::clean_line(raw);
    if (text::trim(line).empty()) continue;
    const std::string where = at(source, line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + "invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw ValidationError(where + "expected a JSON object");
    SentimentRecord r;
    auto number = [&](const char* key) {
      if (!j.contains(key) || !j[key].is_number()) {
        throw ValidationError(where + "missing numeric '" + key + "'");
      }
      return j[key].get<double>();
    };
    if (!j.contains("date") || !j["date"].is_string()) {
      throw ValidationError(where + "missing string 'date'");
    }
    try {
      r.date = Date::parse(j["date"].get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    r.p_neg = number("p_neg");
    r.p_neu = number("p_neu");
    r.p_pos = number("p_pos");
    if (j.contains("text") && j["text"].is_string()) r.text = j["text"].get<std::string>();
    validate_sentiment_record(r, where);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SentimentRecord> read_sentiment_file(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  bool jsonl = ext == ".jsonl" || ext == ".json";
  if (!jsonl && ext != ".csv") {
    auto probe = open_input(path);
    std::string raw;
    while (std::getline(probe, raw)) {
      const auto line = text::trim(text::clean_line(raw));
      if (line.empty()) continue;
      jsonl = line.front() == '{';
      break;
    }
  }
  auto in = open_input(path);
  return jsonl ? parse_sentiment_jsonl(in, path.string()) : parse_sentiment_csv(in, path.string());
}

std::vector<Date> read_calendar(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<Date> out;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = text::clean_line(raw);
    if (text::trim(line).empty()) continue;
    const auto cells = text::split_csv(line);
    if (!header_seen) {
      if (lowercase_header(line).front() != "date") {
        throw ValidationError(at(path.string(), line_no) + "calendar header must start with 'date'");
      }
      header_seen = true;
      continue;
    }
    const std::string where = at(path.string(), line_no);
    const Date d = date_cell(cells, where);
    if (!out.empty() && !(out.back() < d)) {
      throw ValidationError(where + "calendar dates must be strictly increasing");
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace causal_calib::ingest
