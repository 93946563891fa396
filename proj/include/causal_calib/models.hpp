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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "causal_calib/corpus.hpp"
#include "causal_calib/date.hpp"
#include "causal_calib/features.hpp"
#include "causal_calib/losses.hpp"
#include "causal_calib/metrics.hpp"
#include "causal_calib/nn.hpp"

namespace causal_calib::models {

/// One row of a training log CSV (`epoch,split,loss,accuracy`).
struct EpochLog {
  int epoch = 0;
  std::string split;
  double loss = 0.0;
  std::optional<double> accuracy;
};

void write_training_log(std::ostream& out, const std::vector<EpochLog>& log);

// ===========================================================================
// Volatility LSTM

/// Dated volatility with an optional aligned sentiment column.
struct VolTable {
  std::vector<Date> dates;
  std::vector<double> volatility;
  std::vector<double> sentiment;  ///< empty or same length as volatility

  bool has_sentiment() const { return !sentiment.empty(); }
  std::size_t size() const { return dates.size(); }
  void validate() const;
};

/// Reads `target_column` from a features CSV (rows whose target cell is
/// empty are skipped). Sentiment comes from a `date,score,count` file when
/// `sentiment_path` is given, else from a `sentiment` column if present.
/// The join is inner: days without sentiment are dropped.
VolTable load_vol_table(const std::filesystem::path& features_path, std::string_view target_column,
                        const std::optional<std::filesystem::path>& sentiment_path,
                        std::vector<std::string>* warnings = nullptr);

struct VolLstmConfig {
  int timesteps = 1;
  bool use_sentiment = true;
  int layers = 3;
  int hidden = 100;
  double dropout = 0.5;  ///< after every LSTM layer but the last
  int epochs = 100;
  int batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 42;
  double train_fraction = 0.8;

  int input_dim() const { return use_sentiment ? 2 : 1; }
  void validate() const;
  nlohmann::json to_json() const;
  static VolLstmConfig from_json(const nlohmann::json& j);
};

struct VolLstmModel {
  VolLstmConfig config;
  std::vector<nn::LstmLayer> lstm;
  nn::DenseLayer head;
  features::MinMaxScaler volatility_scaler;
  features::MinMaxScaler sentiment_scaler;
  std::size_t train_pairs = 0;

  std::vector<nn::Tensor2D*> parameters();
  std::vector<const nn::Tensor2D*> parameters() const;
  nlohmann::json to_json() const;
  static VolLstmModel from_json(const nlohmann::json& j);
};

struct VolPrediction {
  Date date;
  double actual = 0.0;
  double predicted = 0.0;
};

struct VolTrainingResult {
  VolLstmModel model;
  std::vector<EpochLog> log;
  std::vector<VolPrediction> train_predictions;
  std::vector<VolPrediction> test_predictions;
  metrics::RegressionMetrics train_metrics;
  metrics::RegressionMetrics test_metrics;
};

/// Supervised pairs map the `timesteps` rows ending at t to volatility at
/// t+1. The first train_fraction of pairs (chronologically) is the train
/// split; scalers are fit on the rows those pairs touch. Training uses MSE
/// on scaled targets with Adam and per-epoch shuffling, all from
/// config.seed.
VolTrainingResult train_vol_lstm(const VolTable& table, const VolLstmConfig& config);

/// One-step-ahead predictions for every pair in `table`, dated at the
/// target day, in original volatility units.
std::vector<VolPrediction> predict_vol(const VolLstmModel& model, const VolTable& table);

void write_vol_predictions(std::ostream& out, const std::vector<VolPrediction>& preds);

// ===========================================================================
// DAN 3 text classifier

/// Lowercases ASCII and splits on whitespace and ASCII punctuation.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;

  /// Tokens of the given texts, sorted, after `<pad>` and `<unk>`.
  static Vocabulary build(const std::vector<std::string>& texts);
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::int32_t id(const std::string& token) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Padded/truncated id matrix, one row per text.
  nn::TokenMatrix encode(const std::vector<std::string>& texts, int max_seq_len) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> index_;
};

struct Dan3Config {
  int embed_dim = 100;
  std::array<int, 3> hidden_dims{100, 100, 100};
  int epochs = 20;
  int batch_size = 32;
  double learning_rate = 1e-3;
  int max_seq_len = 64;
  double test_fraction = 0.2;
  losses::LossConfig loss;
  std::uint64_t seed = 42;
  /// Optional whitespace-separated `token v1 ... v_dim` file.
  std::optional<std::filesystem::path> embeddings_path;

  void validate() const;
  nlohmann::json to_json() const;
  static Dan3Config from_json(const nlohmann::json& j);
};

struct Dan3Model {
  Dan3Config config;
  Vocabulary vocab;
  std::vector<std::string> labels;  ///< class index -> label
  nn::EmbeddingLayer embedding;
  std::array<nn::DenseLayer, 3> hidden;
  std::array<nn::BatchNormLayer, 3> norms;
  nn::DenseLayer output;

  std::vector<nn::Tensor2D*> parameters();
  std::vector<const nn::Tensor2D*> parameters() const;

  /// Class probabilities in inference mode (running batch-norm stats).
  nn::Tensor2D predict_proba(const std::vector<std::string>& texts) const;
  int label_index(const std::string& label) const;  ///< -1 if unknown

  nlohmann::json to_json() const;
  static Dan3Model from_json(const nlohmann::json& j);
};

struct ClassifierSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class, ceil(test_fraction * n_c) documents go to test (after a
/// seeded shuffle); index lists are sorted.
ClassifierSplit stratified_split(const std::vector<int>& labels, int classes, double test_fraction,
                                 std::uint64_t seed);

struct ClassifierEvaluation {
  double accuracy = 0.0;
  double classification_error_pct = 0.0;
  double ece_pct = 0.0;
  double mce_pct = 0.0;
  double brier = 0.0;
  metrics::ReliabilityBins reliability;

  nlohmann::json to_json() const;
};

ClassifierEvaluation evaluate_predictions(const losses::PredictionBatch& batch, int bins);

struct Dan3TrainingResult {
  Dan3Model model;
  std::vector<EpochLog> log;
  ClassifierSplit split;
  losses::PredictionBatch test_batch;
  ClassifierEvaluation test_evaluation;
  std::vector<std::string> warnings;
};

Dan3TrainingResult train_dan3(const std::vector<LabeledText>& corpus, const Dan3Config& config);

/// Documents with labels unknown to the model are rejected.
ClassifierEvaluation evaluate_classifier(const Dan3Model& model,
                                         const std::vector<LabeledText>& test_corpus, int bins);

/// `sample_id,true_label,pred_label,p_0,...,p_{C-1}` with exact doubles.
void write_prediction_csv(std::ostream& out, const std::vector<std::size_t>& sample_ids,
                          const losses::PredictionBatch& batch);

struct PredictionDump {
  std::vector<std::size_t> sample_ids;
  losses::PredictionBatch batch;
};

PredictionDump read_prediction_csv(const std::filesystem::path& path);

}  // namespace causal_calib::models
