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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "causal_calib/causality.hpp"
#include "causal_calib/features.hpp"
#include "causal_calib/ingest.hpp"
#include "causal_calib/models.hpp"
#include "causal_calib/synth.hpp"

/// File-level commands behind the CLI. Each reads its inputs, writes its
/// artifacts and reports progress and warnings through a Reporter.
namespace causal_calib::pipeline {

using std::filesystem::path;

struct Reporter {
  std::function<void(std::string_view)> on_progress;
  std::vector<std::string> warnings;

  void progress(std::string_view message) const {
    if (on_progress) on_progress(message);
  }
  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

/// `text::dump_report(j)` written to `file`, creating parent directories.
void write_report(const path& file, const nlohmann::json& j);
/// Exact (unrounded) JSON, used for checkpoints.
void write_exact_json(const path& file, const nlohmann::json& j);
nlohmann::json read_json(const path& file);

struct FeaturesOptions {
  path ohlcv;
  path out;
  features::FeatureConfig config;
};
void run_features(const FeaturesOptions& options, Reporter& reporter);

struct SentimentOptions {
  path news;
  path out;
  std::optional<path> calendar;  ///< no alignment when absent
  ingest::AlignmentPolicy align = ingest::AlignmentPolicy::kNextTradingDay;
  std::optional<path> dump_records;
};
void run_sentiment(const SentimentOptions& options, Reporter& reporter);

struct CausalityOptions {
  path x;
  path y;
  std::string x_column;  ///< empty: first column after `date`
  std::string y_column;
  path out;
  causality::SweepOptions sweep;
  bool stationarity_gate = true;
  int adf_max_lags = -1;  ///< -1: Schwert rule
};
causality::GrangerReport run_causality(const CausalityOptions& options, Reporter& reporter);

enum class SentimentUse { kWith, kWithout, kBoth };

struct TrainVolOptions {
  path features;
  std::optional<path> sentiment;
  std::string target = "volatility";
  SentimentUse use = SentimentUse::kWith;
  models::VolLstmConfig config;  ///< use_sentiment is set from `use`
  path out_dir;
};
void run_train_vol(const TrainVolOptions& options, Reporter& reporter);

/// Applies the keys of a VolLstmConfig JSON object (or of the `model`
/// member of a run's config.json) on top of `config`. Unknown keys are
/// rejected.
void apply_vol_overrides(models::VolLstmConfig& config, const nlohmann::json& overrides);

struct PredictVolOptions {
  path model;
  path features;
  std::optional<path> sentiment;
  std::string target = "volatility";
  path out;
};
void run_predict_vol(const PredictVolOptions& options, Reporter& reporter);

struct TrainClassifierOptions {
  path corpus;
  models::Dan3Config config;
  int bins = metrics::kDefaultBins;
  path out_dir;
};
void run_train_classifier(const TrainClassifierOptions& options, Reporter& reporter);

/// Same contract as apply_vol_overrides for Dan3Config; `loss` may be a
/// name or an object {kind, gamma, lambda}.
void apply_classifier_overrides(models::Dan3Config& config, const nlohmann::json& overrides);

struct EvaluateClassifierOptions {
  path model;
  path corpus;
  int bins = metrics::kDefaultBins;
  path out_dir;
};
void run_evaluate_classifier(const EvaluateClassifierOptions& options, Reporter& reporter);

struct ReportOptions {
  path preds;
  int bins = metrics::kDefaultBins;
  path out;  ///< reliability JSON; the CSV goes next to it
};
void run_report(const ReportOptions& options, Reporter& reporter);

/// {m, ece, mce, brier, bins: [...]}.
nlohmann::json reliability_json(const losses::PredictionBatch& batch, int bins);

// Generators. Each writes its file plus `<out>.meta.json` with the
// generator name, parameters, seed and PRNG id.
void run_synth_var(const synth::VarSpec& spec, const path& out, Reporter& reporter);
/// kind is "walk" or "noise".
void run_synth_series(std::string_view kind, std::size_t length, std::uint64_t seed,
                      const path& out, Reporter& reporter);
void run_synth_corpus(const synth::KeywordCorpusSpec& spec, const path& out, Reporter& reporter);
void run_synth_vol(const synth::VolatilitySentimentSpec& spec, const path& out,
                   Reporter& reporter);
/// Geometric random walk OHLCV bars on business days from 2020-01-01.
void run_synth_prices(std::size_t length, std::uint64_t seed, const path& out,
                      Reporter& reporter);
ingest::PriceSeries synth_prices(std::size_t length, std::uint64_t seed);

}  // namespace causal_calib::pipeline
