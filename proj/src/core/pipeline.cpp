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

#include "causal_calib/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "causal_calib/corpus.hpp"
#include "causal_calib/error.hpp"
#include "causal_calib/metrics.hpp"
#include "causal_calib/random.hpp"
#include "causal_calib/sentiment.hpp"
#include "causal_calib/text.hpp"

namespace causal_calib::pipeline {

namespace {

std::ofstream open_output(const path& file) {
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + file.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  return out;
}

void write_text(const path& file, const std::string& content) {
  auto out = open_output(file);
  out << content;
  if (!out) throw IoError("failed writing " + file.string());
}

template <class Fn>
void write_with(const path& file, Fn&& fn) {
  std::ostringstream buffer;
  fn(buffer);
  write_text(file, buffer.str());
}

void require_file(const path& file, std::string_view what) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(file, ec)) {
    throw IoError(std::string(what) + " not found: " + file.string());
  }
}

bool blank_file(const path& file) {
  std::ifstream in(file, std::ios::binary);
  char ch;
  while (in.get(ch)) {
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

struct DatedColumn {
  std::vector<Date> dates;
  std::vector<double> values;
  std::string column;
  std::size_t empty_cells = 0;
};

/// `column` of a dated CSV; rows whose cell is empty are skipped.
DatedColumn read_dated_column(const path& file, const std::string& column) {
  require_file(file, "input file");
  std::ifstream in(file);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(file.string() + ": missing header");
  const auto header = text::split_csv(text::clean_line(line));
  if (header.empty() || text::trim(header[0]) != "date") {
    throw ValidationError(file.string() + ": first column must be 'date'");
  }
  DatedColumn out;
  std::size_t col = 0;
  if (column.empty()) {
    if (header.size() < 2) throw ValidationError(file.string() + ": no value column");
    col = 1;
  } else {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (text::trim(header[i]) == column) col = i;
    }
    if (col == 0) throw ValidationError(file.string() + ": column '" + column + "' not found");
  }
  out.column = std::string(text::trim(header[col]));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cleaned = text::clean_line(line);
    if (text::trim(cleaned).empty()) continue;
    const auto cells = text::split_csv(cleaned);
    const std::string where = file.string() + ":" + std::to_string(line_no) + ": ";
    if (cells.size() <= col) throw ValidationError(where + "too few columns");
    Date d;
    try {
      d = Date::parse(text::trim(cells[0]));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    if (!out.dates.empty() && !(out.dates.back() < d)) {
      throw ValidationError(where + "dates must be strictly increasing");
    }
    const auto cell = text::trim(cells[col]);
    if (cell.empty()) {
      ++out.empty_cells;
      continue;
    }
    const auto v = text::parse_double(cell);
    if (!v) throw ValidationError(where + "invalid value '" + std::string(cell) + "' in column " + out.column);
    out.dates.push_back(d);
    out.values.push_back(*v);
  }
  return out;
}

nlohmann::json stationarity_json(const causality::StationarityCheck& c) {
  nlohmann::json j = {{"initial", causality::to_json(c.initial)}, {"differenced", c.differenced}};
  if (c.after_difference) j["after_difference"] = causality::to_json(*c.after_difference);
  return j;
}

nlohmann::json metrics_with_warnings(const metrics::RegressionMetrics& m) {
  nlohmann::json j = metrics::to_json(m);
  j["warnings"] = m.warnings;
  return j;
}

void write_meta(const path& out, const std::string& generator, const nlohmann::json& params,
                std::uint64_t seed) {
  path meta = out;
  meta += ".meta.json";
  write_report(meta, {{"generator", generator}, {"params", params}, {"seed", seed}, {"prng", kPrngId}});
}

void write_series_csv(const path& out, const std::vector<Date>& dates,
                      const std::vector<std::string>& names,
                      const std::vector<const std::vector<double>*>& columns) {
  write_with(out, [&](std::ostream& os) {
    os << "date";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < dates.size(); ++i) {
      os << dates[i].iso();
      for (const auto* c : columns) os << ',' << text::format_exact((*c)[i]);
      os << '\n';
    }
  });
}

}  // namespace

void write_report(const path& file, const nlohmann::json& j) { write_text(file, text::dump_report(j)); }

void write_exact_json(const path& file, const nlohmann::json& j) { write_text(file, j.dump(1) + "\n"); }

nlohmann::json read_json(const path& file) {
  require_file(file, "JSON file");
  std::ifstream in(file);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(file.string() + ": invalid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------

void run_features(const FeaturesOptions& options, Reporter& reporter) {
  options.config.validate();
  require_file(options.ohlcv, "OHLCV file");
  const auto series = ingest::read_price_csv(options.ohlcv);
  const auto frame = features::build_feature_frame(series, options.config);
  if (frame.zero_volatility_days > 0) {
    reporter.warn(std::to_string(frame.zero_volatility_days) +
                  " zero-volatility days have no log_volatility");
  }
  write_with(options.out, [&](std::ostream& os) { features::write_feature_csv(os, frame); });
  reporter.progress("features: " + std::to_string(frame.rows.size()) + " rows -> " + options.out.string());
}

void run_sentiment(const SentimentOptions& options, Reporter& reporter) {
  require_file(options.news, "news file");
  std::vector<ingest::SentimentRecord> records;
  if (!blank_file(options.news)) records = ingest::read_sentiment_file(options.news);
  if (options.calendar || !records.empty()) {
    std::vector<Date> calendar;
    if (options.calendar) {
      require_file(*options.calendar, "calendar file");
      calendar = ingest::read_calendar(*options.calendar);
    } else {
      // Weekdays from a week before the first record to a week after the last.
      const auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                                [](const auto& a, const auto& b) { return a.date < b.date; });
      const auto span = (hi->date.days() - lo->date.days()).count() + 15;
      calendar = synth::business_days(lo->date.plus_days(-7), static_cast<std::size_t>(span));
    }
    const std::size_t before = records.size();
    records = ingest::align_dates(std::move(records), calendar, options.align);
    if (records.size() < before) {
      reporter.warn(std::to_string(before - records.size()) + " off-calendar records dropped");
    }
  }
  if (records.empty()) reporter.warn("no sentiment records");
  if (options.dump_records) {
    write_with(*options.dump_records, [&](std::ostream& os) { sentiment::write_record_dump(os, records); });
  }
  const auto days = sentiment::aggregate_daily(records);
  write_with(options.out, [&](std::ostream& os) { sentiment::write_daily_csv(os, days); });
  reporter.progress("sentiment: " + std::to_string(records.size()) + " records -> " +
                    std::to_string(days.size()) + " days -> " + options.out.string());
}

causality::GrangerReport run_causality(const CausalityOptions& options, Reporter& reporter) {
  if (options.sweep.max_lag < 1) throw ValidationError("max lag must be >= 1");
  const auto x = read_dated_column(options.x, options.x_column);
  const auto y = read_dated_column(options.y, options.y_column);
  for (const auto* c : {&x, &y}) {
    if (c->empty_cells > 0) {
      reporter.warn(std::to_string(c->empty_cells) + " empty " + c->column + " cells skipped");
    }
  }
  std::map<Date, double> x_by_date;
  for (std::size_t i = 0; i < x.dates.size(); ++i) x_by_date.emplace(x.dates[i], x.values[i]);
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<Date> joined;
  for (std::size_t i = 0; i < y.dates.size(); ++i) {
    const auto it = x_by_date.find(y.dates[i]);
    if (it == x_by_date.end()) continue;
    joined.push_back(y.dates[i]);
    xs.push_back(it->second);
    ys.push_back(y.values[i]);
  }
  if (joined.empty()) throw ValidationError("x and y share no dates");
  const std::size_t unmatched = x.dates.size() + y.dates.size() - 2 * joined.size();
  if (unmatched > 0) reporter.warn(std::to_string(unmatched) + " rows without a matching date dropped");

  nlohmann::json stationarity = nullptr;
  if (options.stationarity_gate) {
    auto pair = causality::make_stationary(ys, xs, options.adf_max_lags);
    stationarity = {{"x", stationarity_json(pair.x_check)},
                    {"y", stationarity_json(pair.y_check)},
                    {"dropped_leading", pair.dropped_leading}};
    if (pair.x_check.differenced) reporter.warn("x failed ADF at 5% and was differenced once");
    if (pair.y_check.differenced) reporter.warn("y failed ADF at 5% and was differenced once");
    xs = std::move(pair.x);
    ys = std::move(pair.y);
  }
  const auto report = causality::granger_sweep(ys, xs, options.sweep);
  nlohmann::json j = causality::to_json(report);
  j["dof"] = std::string(causality::to_string(options.sweep.dof));
  j["n_obs"] = ys.size();
  j["x_column"] = x.column;
  j["y_column"] = y.column;
  j["stationarity"] = stationarity;
  write_report(options.out, j);
  reporter.progress("causality: case " + std::string(causality::to_string(report.causal_case)) + " -> " +
                    options.out.string());
  return report;
}

// ---------------------------------------------------------------------------

void apply_vol_overrides(models::VolLstmConfig& config, const nlohmann::json& overrides) {
  if (!overrides.is_object()) throw ValidationError("config overrides must be a JSON object");
  const nlohmann::json& j = overrides.contains("model") ? overrides.at("model") : overrides;
  nlohmann::json merged = config.to_json();
  merged.erase("input_dim");
  for (const auto& [key, value] : j.items()) {
    if (key == "input_dim") {
      if (!value.is_number_integer() || (value.get<int>() != 1 && value.get<int>() != 2)) {
        throw ValidationError("config: input_dim must be 1 or 2");
      }
      merged["use_sentiment"] = value.get<int>() == 2;
      continue;
    }
    if (!merged.contains(key)) throw ValidationError("config: unknown key '" + key + "'");
    merged[key] = value;
  }
  config = models::VolLstmConfig::from_json(merged);
}

namespace {

void train_vol_run(const models::VolTable& table, const TrainVolOptions& options,
                   models::VolLstmConfig config, const path& dir, Reporter& reporter,
                   nlohmann::json& summary) {
  auto result = models::train_vol_lstm(table, config);
  nlohmann::json cfg = {{"command", "train-vol"},
                        {"features", options.features.generic_string()},
                        {"sentiment", options.sentiment ? nlohmann::json(options.sentiment->generic_string())
                                                        : nlohmann::json(nullptr)},
                        {"target", options.target},
                        {"model", config.to_json()},
                        {"seed", config.seed},
                        {"prng", kPrngId}};
  write_report(dir / "config.json", cfg);
  write_exact_json(dir / "checkpoint.json", result.model.to_json());
  const std::size_t n_train = result.train_predictions.size();
  const std::size_t n_test = result.test_predictions.size();
  summary = {{"train", metrics_with_warnings(result.train_metrics)},
             {"test", metrics_with_warnings(result.test_metrics)},
             {"n_train", n_train},
             {"n_test", n_test},
             {"train_end", result.train_predictions.back().date.iso()},
             {"test_start", result.test_predictions.front().date.iso()},
             {"use_sentiment", config.use_sentiment},
             {"seed", config.seed}};
  write_report(dir / "metrics.json", summary);
  write_with(dir / "train_log.csv", [&](std::ostream& os) { models::write_training_log(os, result.log); });
  write_with(dir / "predictions.csv",
             [&](std::ostream& os) { models::write_vol_predictions(os, result.test_predictions); });
  write_with(dir / "train_predictions.csv",
             [&](std::ostream& os) { models::write_vol_predictions(os, result.train_predictions); });
  reporter.progress("train-vol: " + std::string(config.use_sentiment ? "with" : "without") +
                    " sentiment, test mse " + text::format_sig(result.test_metrics.mse) + " -> " +
                    dir.string());
}

}  // namespace

void run_train_vol(const TrainVolOptions& options, Reporter& reporter) {
  require_file(options.features, "features file");
  if (options.sentiment) require_file(*options.sentiment, "sentiment file");
  auto table = models::load_vol_table(options.features, options.target, options.sentiment, &reporter.warnings);
  models::VolLstmConfig config = options.config;
  if (options.use != SentimentUse::kBoth) {
    config.use_sentiment = options.use == SentimentUse::kWith;
    nlohmann::json summary;
    train_vol_run(table, options, config, options.out_dir, reporter, summary);
    return;
  }
  nlohmann::json with;
  nlohmann::json without;
  config.use_sentiment = true;
  train_vol_run(table, options, config, options.out_dir / "with_sentiment", reporter, with);
  config.use_sentiment = false;
  train_vol_run(table, options, config, options.out_dir / "without_sentiment", reporter, without);
  const double mse_with = with["test"]["mse"].get<double>();
  const double mse_without = without["test"]["mse"].get<double>();
  write_report(options.out_dir / "comparison.json",
               {{"with_sentiment", {{"test_mse", mse_with}, {"test_rmse", with["test"]["rmse"]}}},
                {"without_sentiment", {{"test_mse", mse_without}, {"test_rmse", without["test"]["rmse"]}}},
                {"lower_test_mse", mse_with < mse_without ? "with_sentiment" : "without_sentiment"},
                {"seed", config.seed}});
}

void run_predict_vol(const PredictVolOptions& options, Reporter& reporter) {
  const auto model = models::VolLstmModel::from_json(read_json(options.model));
  require_file(options.features, "features file");
  if (options.sentiment) require_file(*options.sentiment, "sentiment file");
  auto table = models::load_vol_table(options.features, options.target, options.sentiment, &reporter.warnings);
  const auto preds = models::predict_vol(model, table);
  write_with(options.out, [&](std::ostream& os) { models::write_vol_predictions(os, preds); });
  reporter.progress("predict-vol: " + std::to_string(preds.size()) + " predictions -> " + options.out.string());
}

// ---------------------------------------------------------------------------

void apply_classifier_overrides(models::Dan3Config& config, const nlohmann::json& overrides) {
  if (!overrides.is_object()) throw ValidationError("config overrides must be a JSON object");
  const nlohmann::json& j = overrides.contains("model") ? overrides.at("model") : overrides;
  nlohmann::json merged = config.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!merged.contains(key)) throw ValidationError("config: unknown key '" + key + "'");
    if (key == "loss" && value.is_string()) {
      merged["loss"]["kind"] = value;
    } else if (key == "loss") {
      for (const auto& [k, v] : value.items()) {
        if (!merged["loss"].contains(k)) throw ValidationError("config: unknown loss key '" + k + "'");
        merged["loss"][k] = v;
      }
    } else {
      merged[key] = value;
    }
  }
  config = models::Dan3Config::from_json(merged);
}

nlohmann::json reliability_json(const losses::PredictionBatch& batch, int bins) {
  nlohmann::json j = metrics::to_json(metrics::reliability(batch, bins));
  j["brier"] = metrics::brier(batch);
  return j;
}

namespace {

void write_classifier_outputs(const path& dir, const std::vector<std::size_t>& ids,
                              const losses::PredictionBatch& batch, int bins,
                              const models::ClassifierEvaluation& eval, nlohmann::json metrics_json) {
  metrics_json["test"] = eval.to_json();
  write_report(dir / "metrics.json", metrics_json);
  write_with(dir / "predictions.csv", [&](std::ostream& os) { models::write_prediction_csv(os, ids, batch); });
  write_report(dir / "reliability.json", reliability_json(batch, bins));
  write_text(dir / "reliability.csv", metrics::reliability_csv(eval.reliability));
}

}  // namespace

void run_train_classifier(const TrainClassifierOptions& options, Reporter& reporter) {
  if (options.bins < 1) throw ValidationError("bins must be >= 1");
  require_file(options.corpus, "corpus file");
  const auto corpus = read_corpus_jsonl(options.corpus);
  auto result = models::train_dan3(corpus, options.config);
  for (auto& w : result.warnings) reporter.warn(std::move(w));
  const auto eval = models::evaluate_predictions(result.test_batch, options.bins);
  nlohmann::json cfg = {{"command", "train-classifier"},
                        {"corpus", options.corpus.generic_string()},
                        {"model", options.config.to_json()},
                        {"bins", options.bins},
                        {"seed", options.config.seed},
                        {"prng", kPrngId}};
  write_report(options.out_dir / "config.json", cfg);
  write_exact_json(options.out_dir / "checkpoint.json", result.model.to_json());
  write_with(options.out_dir / "train_log.csv",
             [&](std::ostream& os) { models::write_training_log(os, result.log); });
  const auto& last = result.log.back();
  nlohmann::json m = {{"labels", result.model.labels},
                      {"n_train", result.split.train.size()},
                      {"n_test", result.split.test.size()},
                      {"vocab_size", result.model.vocab.size()},
                      {"loss", std::string(losses::to_string(options.config.loss.kind))},
                      {"final_test_loss", last.loss},
                      {"seed", options.config.seed}};
  write_classifier_outputs(options.out_dir, result.split.test, result.test_batch, options.bins, eval, m);
  reporter.progress("train-classifier: test accuracy " + text::format_sig(eval.accuracy, 4) + ", ECE " +
                    text::format_sig(eval.ece_pct, 4) + "% -> " + options.out_dir.string());
}

void run_evaluate_classifier(const EvaluateClassifierOptions& options, Reporter& reporter) {
  if (options.bins < 1) throw ValidationError("bins must be >= 1");
  const auto model = models::Dan3Model::from_json(read_json(options.model));
  require_file(options.corpus, "corpus file");
  const auto corpus = read_corpus_jsonl(options.corpus);
  if (corpus.empty()) throw ValidationError("empty corpus");
  std::vector<std::string> texts;
  std::vector<int> labels;
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const int idx = model.label_index(corpus[i].label);
    if (idx < 0) throw ValidationError("document " + std::to_string(i) + ": label unknown to the model: " + corpus[i].label);
    texts.push_back(corpus[i].text);
    labels.push_back(idx);
    ids.push_back(i);
  }
  const losses::PredictionBatch batch{model.predict_proba(texts), labels};
  const auto eval = models::evaluate_predictions(batch, options.bins);
  write_classifier_outputs(options.out_dir, ids, batch, options.bins, eval,
                           {{"labels", model.labels}, {"n_test", corpus.size()}});
  reporter.progress("evaluate-classifier: accuracy " + text::format_sig(eval.accuracy, 4) + " -> " +
                    options.out_dir.string());
}

void run_report(const ReportOptions& options, Reporter& reporter) {
  if (options.bins < 1) throw ValidationError("bins must be >= 1");
  require_file(options.preds, "predictions file");
  const auto dump = models::read_prediction_csv(options.preds);
  if (dump.batch.size() == 0) throw ValidationError(options.preds.string() + ": no predictions");
  write_report(options.out, reliability_json(dump.batch, options.bins));
  path csv = options.out;
  csv.replace_extension(".csv");
  write_text(csv, metrics::reliability_csv(metrics::reliability(dump.batch, options.bins)));
  reporter.progress("report: " + std::to_string(dump.batch.size()) + " predictions -> " + options.out.string());
}

// ---------------------------------------------------------------------------

void run_synth_var(const synth::VarSpec& spec, const path& out, Reporter& reporter) {
  const auto series = synth::gen_coupled_var(spec);
  write_series_csv(out, synth::business_days(Date(2020, 1, 1), spec.length), {"x", "y"},
                   {&series.x, &series.y});
  write_meta(out, "coupled-var",
             {{"length", spec.length}, {"phi_y", spec.phi_y}, {"beta_x", spec.beta_x},
              {"lag_x", spec.lag_x}, {"noise_sd", spec.noise_sd}, {"burn_in", synth::kBurnIn}},
             spec.seed);
  reporter.progress("synth var -> " + out.string());
}

void run_synth_series(std::string_view kind, std::size_t length, std::uint64_t seed, const path& out,
                      Reporter& reporter) {
  if (length < 1) throw ValidationError("length must be >= 1");
  std::vector<double> values;
  if (kind == "walk") {
    values = synth::gen_random_walk(length, seed);
  } else if (kind == "noise") {
    values = synth::gen_white_noise(length, seed);
  } else {
    throw ValidationError("unknown series kind '" + std::string(kind) + "' (allowed: walk, noise)");
  }
  write_series_csv(out, synth::business_days(Date(2020, 1, 1), length), {"value"}, {&values});
  write_meta(out, kind == "walk" ? "random-walk" : "white-noise", {{"length", length}}, seed);
  reporter.progress("synth " + std::string(kind) + " -> " + out.string());
}

void run_synth_corpus(const synth::KeywordCorpusSpec& spec, const path& out, Reporter& reporter) {
  const auto corpus = synth::gen_keyword_corpus(spec);
  write_with(out, [&](std::ostream& os) { write_corpus_jsonl(os, corpus); });
  write_meta(out, "keyword-corpus",
             {{"classes", spec.classes}, {"keywords_per_class", spec.keywords_per_class},
              {"docs_per_class", spec.docs_per_class}, {"doc_len", spec.doc_len},
              {"filler_tokens", spec.filler_tokens}, {"keyword_fraction", spec.keyword_fraction},
              {"label_noise_rate", spec.label_noise_rate}},
             spec.seed);
  reporter.progress("synth corpus: " + std::to_string(corpus.size()) + " documents -> " + out.string());
}

void run_synth_vol(const synth::VolatilitySentimentSpec& spec, const path& out, Reporter& reporter) {
  const auto s = synth::gen_volatility_sentiment(spec);
  write_series_csv(out, s.dates, {"volatility", "sentiment"}, {&s.volatility, &s.sentiment});
  write_meta(out, "volatility-sentiment",
             {{"length", spec.length}, {"persistence", spec.persistence},
              {"sentiment_weight", spec.sentiment_weight}, {"level", spec.level}},
             spec.seed);
  reporter.progress("synth vol -> " + out.string());
}

ingest::PriceSeries synth_prices(std::size_t length, std::uint64_t seed) {
  if (length < 1) throw ValidationError("length must be >= 1");
  SplitMix64 rng(seed);
  const auto dates = synth::business_days(Date(2020, 1, 1), length);
  ingest::PriceSeries out;
  double prev = 100.0;
  for (std::size_t i = 0; i < length; ++i) {
    const double close = prev * std::exp(0.01 * rng.normal());
    const double open = prev;
    const double high = std::max(open, close) * (1.0 + 0.005 * std::abs(rng.normal()));
    const double low = std::min(open, close) * (1.0 - 0.005 * std::abs(rng.normal()));
    const double volume = 1.0e6 + static_cast<double>(rng.below(100000));
    // Two decimals, as quoted prices are; rounding keeps low <= open, close <= high.
    auto cents = [](double v) { return std::round(v * 100.0) / 100.0; };
    out.push_back({dates[i], cents(open), cents(high), cents(low), cents(close), volume});
    prev = close;
  }
  return out;
}

void run_synth_prices(std::size_t length, std::uint64_t seed, const path& out, Reporter& reporter) {
  const auto series = synth_prices(length, seed);
  write_with(out, [&](std::ostream& os) { ingest::write_price_csv(os, series); });
  write_meta(out, "gbm-prices", {{"length", length}, {"start", 100.0}, {"daily_sd", 0.01}}, seed);
  reporter.progress("synth prices -> " + out.string());
}

}  // namespace causal_calib::pipeline
