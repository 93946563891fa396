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

#include "causal_calib/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "causal_calib/error.hpp"
#include "causal_calib/random.hpp"
#include "causal_calib/text.hpp"

namespace causal_calib::models {

using nn::Tensor2D;

namespace {

std::string optional_cell(const std::optional<double>& v) {
  return v ? text::format_exact(*v) : std::string();
}

void shuffle(std::vector<std::size_t>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

nlohmann::json dense_json(const nn::DenseLayer& d) {
  return {{"weight", nn::to_json(d.weight)}, {"bias", nn::to_json(d.bias)}};
}

nn::DenseLayer dense_from_json(const nlohmann::json& j, const std::string& name) {
  nn::DenseLayer d;
  d.weight = nn::tensor_from_json(j.at("weight"), name + ".weight");
  d.bias = nn::tensor_from_json(j.at("bias"), name + ".bias");
  if (d.bias.rows() != 1 || d.bias.cols() != d.weight.rows()) {
    throw ValidationError("checkpoint: inconsistent shapes in " + name);
  }
  return d;
}

nlohmann::json scaler_json(const features::MinMaxScaler& s) { return {{"lo", s.lo}, {"hi", s.hi}}; }

features::MinMaxScaler scaler_from_json(const nlohmann::json& j) {
  return {j.at("lo").get<double>(), j.at("hi").get<double>()};
}

/// Column positions of a CSV header.
std::map<std::string, std::size_t> header_index(const std::vector<std::string>& header) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(std::string(text::trim(header[i])), i);
  return index;
}

}  // namespace

void write_training_log(std::ostream& out, const std::vector<EpochLog>& log) {
  out << "epoch,split,loss,accuracy\n";
  for (const auto& row : log) {
    out << row.epoch << ',' << row.split << ',' << text::format_exact(row.loss) << ','
        << optional_cell(row.accuracy) << '\n';
  }
}

// ===========================================================================
// Volatility LSTM

void VolTable::validate() const {
  if (volatility.size() != dates.size()) throw ValidationError("vol table: column length mismatch");
  if (!sentiment.empty() && sentiment.size() != dates.size()) {
    throw ValidationError("vol table: sentiment column length mismatch");
  }
  for (std::size_t i = 0; i < dates.size(); ++i) {
    if (i > 0 && !(dates[i - 1] < dates[i])) {
      throw ValidationError("vol table: dates not strictly increasing at row " + std::to_string(i + 1) +
                            " (" + dates[i].iso() + ")");
    }
    if (!std::isfinite(volatility[i]) || (!sentiment.empty() && !std::isfinite(sentiment[i]))) {
      throw ValidationError("vol table: non-finite value at row " + std::to_string(i + 1) + " (" +
                            dates[i].iso() + ")");
    }
  }
}

namespace {

std::map<Date, double> read_daily_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sentiment file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": missing header");
  const auto cols = header_index(text::split_csv(text::clean_line(line)));
  if (!cols.count("date") || !cols.count("score")) {
    throw ValidationError(path.string() + ": header must contain date and score");
  }
  const std::size_t date_col = cols.at("date");
  const std::size_t score_col = cols.at("score");
  std::map<Date, double> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cleaned = text::clean_line(line);
    if (text::trim(cleaned).empty()) continue;
    const auto cells = text::split_csv(cleaned);
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (cells.size() <= std::max(date_col, score_col)) throw ValidationError(where + "too few columns");
    Date d;
    try {
      d = Date::parse(text::trim(cells[date_col]));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    const auto v = text::parse_double(text::trim(cells[score_col]));
    if (!v) throw ValidationError(where + "invalid score '" + cells[score_col] + "'");
    if (!out.emplace(d, *v).second) throw ValidationError(where + "duplicate date " + d.iso());
  }
  return out;
}

}  // namespace

VolTable load_vol_table(const std::filesystem::path& features_path, std::string_view target_column,
                        const std::optional<std::filesystem::path>& sentiment_path,
                        std::vector<std::string>* warnings) {
  std::ifstream in(features_path);
  if (!in) throw IoError("cannot open features file: " + features_path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(features_path.string() + ": missing header");
  const auto cols = header_index(text::split_csv(text::clean_line(line)));
  const std::string target(target_column);
  if (!cols.count("date")) throw ValidationError(features_path.string() + ": no date column");
  if (!cols.count(target)) {
    throw ValidationError(features_path.string() + ": feature column '" + target + "' missing");
  }
  std::optional<std::map<Date, double>> external;
  if (sentiment_path) external = read_daily_scores(*sentiment_path);
  const bool column_sentiment = !external && cols.count("sentiment");

  VolTable table;
  std::size_t skipped_target = 0;
  std::size_t skipped_sentiment = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cleaned = text::clean_line(line);
    if (text::trim(cleaned).empty()) continue;
    const auto cells = text::split_csv(cleaned);
    const std::string where = features_path.string() + ":" + std::to_string(line_no) + ": ";
    auto cell = [&](const std::string& name) -> std::string_view {
      const std::size_t idx = cols.at(name);
      if (idx >= cells.size()) throw ValidationError(where + "too few columns");
      return text::trim(cells[idx]);
    };
    auto number = [&](const std::string& name) {
      const auto raw = cell(name);
      const auto v = text::parse_double(raw);
      if (!v) {
        throw ValidationError(where + "invalid value '" + std::string(raw) + "' in column " + name);
      }
      return *v;
    };
    Date d;
    try {
      d = Date::parse(cell("date"));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    if (cell(target).empty()) {
      ++skipped_target;
      continue;
    }
    const double vol = number(target);
    double sent = 0.0;
    if (external) {
      const auto it = external->find(d);
      if (it == external->end()) {
        ++skipped_sentiment;
        continue;
      }
      sent = it->second;
    } else if (column_sentiment) {
      if (cell("sentiment").empty()) {
        ++skipped_sentiment;
        continue;
      }
      sent = number("sentiment");
    }
    table.dates.push_back(d);
    table.volatility.push_back(vol);
    if (external || column_sentiment) table.sentiment.push_back(sent);
  }
  if (warnings) {
    if (skipped_target > 0) {
      warnings->push_back(std::to_string(skipped_target) + " rows without " + target + " skipped");
    }
    if (skipped_sentiment > 0) {
      warnings->push_back(std::to_string(skipped_sentiment) + " rows without sentiment dropped");
    }
  }
  table.validate();
  return table;
}

void VolLstmConfig::validate() const {
  if (timesteps < 1) throw ValidationError("timesteps must be >= 1");
  if (layers < 1) throw ValidationError("layers must be >= 1");
  if (hidden < 1) throw ValidationError("hidden size must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ValidationError("dropout must be in [0, 1)");
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("batch size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning rate must be positive");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must be in (0, 1)");
  }
}

nlohmann::json VolLstmConfig::to_json() const {
  return {{"timesteps", timesteps},         {"use_sentiment", use_sentiment},
          {"input_dim", input_dim()},       {"layers", layers},
          {"hidden", hidden},               {"dropout", dropout},
          {"epochs", epochs},               {"batch_size", batch_size},
          {"learning_rate", learning_rate}, {"seed", seed},
          {"train_fraction", train_fraction}};
}

VolLstmConfig VolLstmConfig::from_json(const nlohmann::json& j) {
  VolLstmConfig c;
  try {
    c.timesteps = j.at("timesteps").get<int>();
    c.use_sentiment = j.at("use_sentiment").get<bool>();
    c.layers = j.at("layers").get<int>();
    c.hidden = j.at("hidden").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.epochs = j.at("epochs").get<int>();
    c.batch_size = j.at("batch_size").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.train_fraction = j.at("train_fraction").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("vol config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<Tensor2D*> VolLstmModel::parameters() {
  std::vector<Tensor2D*> out;
  for (auto& layer : lstm) {
    for (auto* p : layer.parameters()) out.push_back(p);
  }
  for (auto* p : head.parameters()) out.push_back(p);
  return out;
}

std::vector<const Tensor2D*> VolLstmModel::parameters() const {
  std::vector<const Tensor2D*> out;
  for (const auto& layer : lstm) {
    for (const auto* p : layer.parameters()) out.push_back(p);
  }
  for (const auto* p : head.parameters()) out.push_back(p);
  return out;
}

nlohmann::json VolLstmModel::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : lstm) {
    layers.push_back({{"w_input", nn::to_json(l.w_input)},
                      {"w_hidden", nn::to_json(l.w_hidden)},
                      {"bias", nn::to_json(l.bias)}});
  }
  return {{"kind", "vol-lstm"},
          {"prng", kPrngId},
          {"config", config.to_json()},
          {"lstm", layers},
          {"head", dense_json(head)},
          {"volatility_scaler", scaler_json(volatility_scaler)},
          {"sentiment_scaler", scaler_json(sentiment_scaler)},
          {"train_pairs", train_pairs}};
}

VolLstmModel VolLstmModel::from_json(const nlohmann::json& j) {
  VolLstmModel m;
  try {
    if (j.at("kind").get<std::string>() != "vol-lstm") {
      throw ValidationError("checkpoint is not a volatility model");
    }
    m.config = VolLstmConfig::from_json(j.at("config"));
    const auto& layers = j.at("lstm");
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::string name = "lstm[" + std::to_string(i) + "]";
      nn::LstmLayer l;
      l.w_input = nn::tensor_from_json(layers[i].at("w_input"), name + ".w_input");
      l.w_hidden = nn::tensor_from_json(layers[i].at("w_hidden"), name + ".w_hidden");
      l.bias = nn::tensor_from_json(layers[i].at("bias"), name + ".bias");
      m.lstm.push_back(std::move(l));
    }
    m.head = dense_from_json(j.at("head"), "head");
    m.volatility_scaler = scaler_from_json(j.at("volatility_scaler"));
    m.sentiment_scaler = scaler_from_json(j.at("sentiment_scaler"));
    m.train_pairs = j.at("train_pairs").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("vol checkpoint: ") + e.what());
  }
  const auto h = static_cast<Eigen::Index>(m.config.hidden);
  bool ok = static_cast<int>(m.lstm.size()) == m.config.layers && m.head.in() == h &&
            m.head.out() == 1;
  for (std::size_t i = 0; ok && i < m.lstm.size(); ++i) {
    const auto& l = m.lstm[i];
    const Eigen::Index in = i == 0 ? m.config.input_dim() : h;
    ok = l.in() == in && l.hidden() == h && l.w_input.rows() == 4 * h && l.w_hidden.rows() == 4 * h &&
         l.bias.rows() == 1 && l.bias.cols() == 4 * h;
  }
  if (!ok) throw ValidationError("vol checkpoint: layer shapes do not match the config");
  return m;
}

namespace {

struct VolForwardCache {
  std::vector<nn::LstmSequenceCache> layers;
  std::vector<std::vector<Tensor2D>> masks;
  Tensor2D top;
};

/// Scaled inputs, one tensor per timestep, for the pairs in `pairs`.
std::vector<Tensor2D> vol_inputs(const VolLstmModel& model, const VolTable& table,
                                 const std::vector<std::size_t>& pairs) {
  const int steps = model.config.timesteps;
  const int dim = model.config.input_dim();
  std::vector<Tensor2D> inputs(static_cast<std::size_t>(steps),
                               Tensor2D(static_cast<Eigen::Index>(pairs.size()), dim));
  for (std::size_t b = 0; b < pairs.size(); ++b) {
    for (int s = 0; s < steps; ++s) {
      const std::size_t row = pairs[b] + static_cast<std::size_t>(s);
      auto& x = inputs[static_cast<std::size_t>(s)];
      const auto r = static_cast<Eigen::Index>(b);
      x(r, 0) = model.volatility_scaler.transform(table.volatility[row]);
      if (dim == 2) x(r, 1) = model.sentiment_scaler.transform(table.sentiment[row]);
    }
  }
  return inputs;
}

Tensor2D vol_forward(const VolLstmModel& model, const std::vector<Tensor2D>& inputs, bool training,
                     SplitMix64& rng, VolForwardCache& cache) {
  const std::size_t n_layers = model.lstm.size();
  cache.layers.assign(n_layers, {});
  cache.masks.assign(n_layers, {});
  std::vector<Tensor2D> current = inputs;
  for (std::size_t l = 0; l < n_layers; ++l) {
    auto hs = nn::lstm_forward_sequence(model.lstm[l], current, cache.layers[l]);
    if (l + 1 < n_layers) {
      cache.masks[l].resize(hs.size());
      for (std::size_t t = 0; t < hs.size(); ++t) {
        hs[t] = nn::dropout(hs[t], model.config.dropout, training, rng, cache.masks[l][t]);
      }
    }
    current = std::move(hs);
  }
  cache.top = current.back();
  return nn::dense_forward(model.head, cache.top);
}

void vol_backward(const VolLstmModel& model, const VolForwardCache& cache, const Tensor2D& grad_out,
                  std::vector<nn::LstmLayer>& lstm_grads, nn::DenseLayer& head_grads) {
  const Tensor2D grad_top = nn::dense_backward(model.head, cache.top, grad_out, head_grads);
  const std::size_t steps = cache.layers.back().steps.size();
  std::vector<Tensor2D> grad_hidden(steps, Tensor2D::Zero(grad_top.rows(), grad_top.cols()));
  grad_hidden.back() = grad_top;
  for (std::size_t l = model.lstm.size(); l-- > 0;) {
    auto grad_in = nn::lstm_backward_sequence(model.lstm[l], cache.layers[l], grad_hidden, lstm_grads[l]);
    if (l == 0) break;
    for (std::size_t t = 0; t < steps; ++t) {
      grad_hidden[t] = grad_in[t].cwiseProduct(cache.masks[l - 1][t]);
    }
  }
}

std::size_t pair_count(const VolTable& table, int timesteps) {
  const auto t = static_cast<std::size_t>(timesteps);
  return table.size() > t ? table.size() - t : 0;
}

/// Inference over the given pairs, in original units.
std::vector<VolPrediction> predict_pairs(const VolLstmModel& model, const VolTable& table,
                                         const std::vector<std::size_t>& pairs) {
  std::vector<VolPrediction> out;
  if (pairs.empty()) return out;
  SplitMix64 unused(0);
  VolForwardCache cache;
  const Tensor2D pred = vol_forward(model, vol_inputs(model, table, pairs), false, unused, cache);
  nn::require_finite(pred, "volatility head");
  const auto steps = static_cast<std::size_t>(model.config.timesteps);
  out.reserve(pairs.size());
  for (std::size_t b = 0; b < pairs.size(); ++b) {
    const std::size_t target = pairs[b] + steps;
    out.push_back({table.dates[target], table.volatility[target],
                   model.volatility_scaler.inverse(pred(static_cast<Eigen::Index>(b), 0))});
  }
  return out;
}

metrics::RegressionMetrics score(const std::vector<VolPrediction>& preds) {
  std::vector<double> y;
  std::vector<double> y_hat;
  for (const auto& p : preds) {
    y.push_back(p.actual);
    y_hat.push_back(p.predicted);
  }
  return metrics::regression_metrics(y, y_hat);
}

std::vector<std::size_t> iota(std::size_t from, std::size_t to) {
  std::vector<std::size_t> v;
  for (std::size_t i = from; i < to; ++i) v.push_back(i);
  return v;
}

}  // namespace

VolTrainingResult train_vol_lstm(const VolTable& table, const VolLstmConfig& config) {
  config.validate();
  table.validate();
  if (config.use_sentiment && !table.has_sentiment()) {
    throw ValidationError("use_sentiment is set but the table has no sentiment column");
  }
  if (table.size() <= static_cast<std::size_t>(config.timesteps) + 10) {
    throw ValidationError("volatility table too short: " + std::to_string(table.size()) +
                          " rows for timesteps " + std::to_string(config.timesteps));
  }
  const std::size_t n_pairs = pair_count(table, config.timesteps);
  const auto n_train = static_cast<std::size_t>(
      std::floor(config.train_fraction * static_cast<double>(n_pairs)));
  if (n_train < 1 || n_train >= n_pairs) {
    throw ValidationError("train fraction leaves an empty train or test split");
  }
  const auto steps = static_cast<std::size_t>(config.timesteps);

  VolTrainingResult result;
  VolLstmModel& model = result.model;
  model.config = config;
  model.train_pairs = n_train;
  // Train pairs read rows [0, n_train + steps - 1) as inputs and rows up to
  // n_train + steps - 1 as targets; scalers see nothing later.
  const std::span<const double> vol(table.volatility);
  model.volatility_scaler = features::MinMaxScaler::fit(vol.first(n_train + steps));
  if (config.use_sentiment) {
    model.sentiment_scaler =
        features::MinMaxScaler::fit(std::span<const double>(table.sentiment).first(n_train + steps - 1));
  }

  SplitMix64 rng(config.seed);
  const auto h = static_cast<Eigen::Index>(config.hidden);
  for (int l = 0; l < config.layers; ++l) {
    model.lstm.push_back(nn::LstmLayer::create(l == 0 ? config.input_dim() : h, h, rng));
  }
  model.head = nn::DenseLayer::create(h, 1, rng);

  nn::Adam adam({config.learning_rate}, model.parameters());
  std::vector<std::size_t> order = iota(0, n_train);
  const std::vector<std::size_t> train_pairs = order;
  const std::vector<std::size_t> test_pairs = iota(n_train, n_pairs);
  const auto batch_size = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(order, rng);
    double fit_loss = 0.0;
    for (std::size_t start = 0, batch_no = 1; start < n_train; start += batch_size, ++batch_no) {
      const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                           order.begin() + static_cast<std::ptrdiff_t>(
                                                               std::min(start + batch_size, n_train)));
      VolForwardCache cache;
      const Tensor2D pred = vol_forward(model, vol_inputs(model, table, batch), true, rng, cache);
      std::vector<double> target;
      for (std::size_t p : batch) target.push_back(model.volatility_scaler.transform(table.volatility[p + steps]));
      const auto mse = losses::mse_loss(std::span<const double>(pred.data(), batch.size()), target);
      if (!std::isfinite(mse.value)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_no));
      }
      fit_loss += mse.value * static_cast<double>(batch.size());
      const Tensor2D grad_out =
          Eigen::Map<const Tensor2D>(mse.grad.data(), static_cast<Eigen::Index>(batch.size()), 1);
      std::vector<nn::LstmLayer> lstm_grads;
      for (const auto& l : model.lstm) lstm_grads.push_back(l.zeros_like());
      nn::DenseLayer head_grads = model.head.zeros_like();
      vol_backward(model, cache, grad_out, lstm_grads, head_grads);
      std::vector<const Tensor2D*> grads;
      for (const auto& g : lstm_grads) {
        for (const auto* p : g.parameters()) grads.push_back(p);
      }
      for (const auto* p : head_grads.parameters()) grads.push_back(p);
      try {
        adam.step(model.parameters(), grads);
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch_no) +
                           ": " + e.what());
      }
    }
    result.log.push_back({epoch, "fit", fit_loss / static_cast<double>(n_train), std::nullopt});
    result.train_predictions = predict_pairs(model, table, train_pairs);
    result.test_predictions = predict_pairs(model, table, test_pairs);
    result.train_metrics = score(result.train_predictions);
    result.test_metrics = score(result.test_predictions);
    result.log.push_back({epoch, "train", result.train_metrics.mse, std::nullopt});
    result.log.push_back({epoch, "test", result.test_metrics.mse, std::nullopt});
  }
  return result;
}

std::vector<VolPrediction> predict_vol(const VolLstmModel& model, const VolTable& table) {
  table.validate();
  if (table.size() == 0) throw ValidationError("empty feature table");
  if (model.config.use_sentiment && !table.has_sentiment()) {
    throw ValidationError("model uses sentiment but the feature table has no sentiment column");
  }
  const std::size_t n_pairs = pair_count(table, model.config.timesteps);
  if (n_pairs == 0) {
    throw ValidationError("feature table needs more than " + std::to_string(model.config.timesteps) +
                          " rows");
  }
  return predict_pairs(model, table, iota(0, n_pairs));
}

void write_vol_predictions(std::ostream& out, const std::vector<VolPrediction>& preds) {
  out << "date,actual,predicted\n";
  for (const auto& p : preds) {
    out << p.date.iso() << ',' << text::format_exact(p.actual) << ','
        << text::format_exact(p.predicted) << '\n';
  }
}

// ===========================================================================
// DAN 3

std::vector<std::string> tokenize(std::string_view input) {
  std::vector<std::string> out;
  std::string current;
  for (char ch : input) {
    const auto u = static_cast<unsigned char>(ch);
    if (u < 0x80 && (std::isspace(u) || std::ispunct(u))) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current += u < 0x80 ? static_cast<char>(std::tolower(u)) : ch;
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

Vocabulary Vocabulary::build(const std::vector<std::string>& texts) {
  std::set<std::string> unique;
  for (const auto& t : texts) {
    for (auto& tok : tokenize(t)) unique.insert(std::move(tok));
  }
  std::vector<std::string> tokens{"<pad>", "<unk>"};
  unique.erase("<pad>");
  unique.erase("<unk>");
  tokens.insert(tokens.end(), unique.begin(), unique.end());
  return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != "<pad>" || tokens[1] != "<unk>") {
    throw ValidationError("vocabulary must start with <pad>, <unk>");
  }
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    if (!v.index_.emplace(v.tokens_[i], static_cast<std::int32_t>(i)).second) {
      throw ValidationError("vocabulary has duplicate token '" + v.tokens_[i] + "'");
    }
  }
  return v;
}

std::int32_t Vocabulary::id(const std::string& token) const {
  const auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

nn::TokenMatrix Vocabulary::encode(const std::vector<std::string>& texts, int max_seq_len) const {
  if (max_seq_len < 1) throw ValidationError("max_seq_len must be >= 1");
  nn::TokenMatrix ids = nn::TokenMatrix::Constant(static_cast<Eigen::Index>(texts.size()), max_seq_len, kPad);
  for (std::size_t r = 0; r < texts.size(); ++r) {
    const auto toks = tokenize(texts[r]);
    const std::size_t n = std::min(toks.size(), static_cast<std::size_t>(max_seq_len));
    for (std::size_t c = 0; c < n; ++c) {
      ids(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = id(toks[c]);
    }
  }
  return ids;
}

void Dan3Config::validate() const {
  if (embed_dim < 1) throw ValidationError("embed_dim must be >= 1");
  for (int h : hidden_dims) {
    if (h < 1) throw ValidationError("hidden dims must be >= 1");
  }
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (batch_size < 2) throw ValidationError("batch size must be >= 2 (batch normalization)");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning rate must be positive");
  }
  if (max_seq_len < 1) throw ValidationError("max_seq_len must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test fraction must be in (0, 1)");
  }
  loss.validate();
}

nlohmann::json Dan3Config::to_json() const {
  return {{"embed_dim", embed_dim},
          {"hidden_dims", hidden_dims},
          {"epochs", epochs},
          {"batch_size", batch_size},
          {"learning_rate", learning_rate},
          {"max_seq_len", max_seq_len},
          {"test_fraction", test_fraction},
          {"loss", {{"kind", std::string(losses::to_string(loss.kind))},
                    {"gamma", loss.gamma},
                    {"lambda", loss.lambda}}},
          {"seed", seed},
          {"embeddings", embeddings_path ? nlohmann::json(embeddings_path->string())
                                         : nlohmann::json(nullptr)}};
}

Dan3Config Dan3Config::from_json(const nlohmann::json& j) {
  Dan3Config c;
  try {
    c.embed_dim = j.at("embed_dim").get<int>();
    c.hidden_dims = j.at("hidden_dims").get<std::array<int, 3>>();
    c.epochs = j.at("epochs").get<int>();
    c.batch_size = j.at("batch_size").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.max_seq_len = j.at("max_seq_len").get<int>();
    c.test_fraction = j.at("test_fraction").get<double>();
    const auto& loss = j.at("loss");
    c.loss.kind = losses::parse_loss_kind(loss.at("kind").get<std::string>());
    c.loss.gamma = loss.at("gamma").get<double>();
    c.loss.lambda = loss.at("lambda").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("embeddings") && j["embeddings"].is_string()) {
      c.embeddings_path = j["embeddings"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("classifier config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<Tensor2D*> Dan3Model::parameters() {
  std::vector<Tensor2D*> out = embedding.parameters();
  for (std::size_t l = 0; l < hidden.size(); ++l) {
    for (auto* p : hidden[l].parameters()) out.push_back(p);
    for (auto* p : norms[l].parameters()) out.push_back(p);
  }
  for (auto* p : output.parameters()) out.push_back(p);
  return out;
}

std::vector<const Tensor2D*> Dan3Model::parameters() const {
  std::vector<const Tensor2D*> out = embedding.parameters();
  for (std::size_t l = 0; l < hidden.size(); ++l) {
    for (const auto* p : hidden[l].parameters()) out.push_back(p);
    for (const auto* p : norms[l].parameters()) out.push_back(p);
  }
  for (const auto* p : output.parameters()) out.push_back(p);
  return out;
}

namespace {

struct DanCache {
  Tensor2D pooled;
  std::array<Tensor2D, 3> inputs;      ///< input of each hidden dense layer
  std::array<Tensor2D, 3> normalized;  ///< batch-norm output (pre-ReLU)
  std::array<nn::BatchNormCache, 3> norm_caches;
  Tensor2D top;
};

/// Logits for a batch. Training mode updates the batch-norm running stats
/// of `norms`.
Tensor2D dan_forward(const Dan3Model& model, std::array<nn::BatchNormLayer, 3>& norms,
                     const nn::TokenMatrix& ids, bool training, DanCache& cache) {
  cache.pooled = nn::embedding_mean_forward(model.embedding, ids, Vocabulary::kPad);
  Tensor2D a = cache.pooled;
  for (std::size_t l = 0; l < 3; ++l) {
    cache.inputs[l] = a;
    const Tensor2D z = nn::dense_forward(model.hidden[l], a);
    cache.normalized[l] = nn::batchnorm_forward(norms[l], z, training, cache.norm_caches[l]);
    a = nn::relu(cache.normalized[l]);
  }
  cache.top = a;
  return nn::dense_forward(model.output, a);
}

struct DanGrads {
  nn::EmbeddingLayer embedding;
  std::array<nn::DenseLayer, 3> hidden;
  std::array<nn::BatchNormLayer, 3> norms;
  nn::DenseLayer output;

  explicit DanGrads(const Dan3Model& m)
      : embedding(m.embedding.zeros_like()),
        hidden{m.hidden[0].zeros_like(), m.hidden[1].zeros_like(), m.hidden[2].zeros_like()},
        norms{m.norms[0].zeros_like(), m.norms[1].zeros_like(), m.norms[2].zeros_like()},
        output(m.output.zeros_like()) {}

  std::vector<const Tensor2D*> list() const {
    std::vector<const Tensor2D*> out = embedding.parameters();
    for (std::size_t l = 0; l < 3; ++l) {
      for (const auto* p : hidden[l].parameters()) out.push_back(p);
      for (const auto* p : norms[l].parameters()) out.push_back(p);
    }
    for (const auto* p : output.parameters()) out.push_back(p);
    return out;
  }
};

void dan_backward(const Dan3Model& model, const nn::TokenMatrix& ids, const DanCache& cache,
                  const Tensor2D& grad_logits, DanGrads& grads) {
  Tensor2D g = nn::dense_backward(model.output, cache.top, grad_logits, grads.output);
  for (std::size_t l = 3; l-- > 0;) {
    g = nn::relu_backward(cache.normalized[l], g);
    g = nn::batchnorm_backward(model.norms[l], cache.norm_caches[l], g, grads.norms[l]);
    g = nn::dense_backward(model.hidden[l], cache.inputs[l], g, grads.hidden[l]);
  }
  nn::embedding_mean_backward(ids, Vocabulary::kPad, g, grads.embedding);
}

nn::TokenMatrix select_rows(const nn::TokenMatrix& ids, const std::vector<std::size_t>& rows) {
  nn::TokenMatrix out(static_cast<Eigen::Index>(rows.size()), ids.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = ids.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

/// Overwrites rows of `table` for vocabulary tokens found in the file.
std::size_t load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                            Tensor2D& table) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::size_t matched = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields{std::string(text::clean_line(line))};
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    std::string cell;
    while (fields >> cell) {
      const auto v = text::parse_double(cell);
      if (!v) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": invalid value '" +
                              cell + "'");
      }
      values.push_back(*v);
    }
    if (static_cast<Eigen::Index>(values.size()) != table.cols()) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.cols()) + " values, got " +
                            std::to_string(values.size()));
    }
    const std::int32_t id = vocab.id(token);
    if (id == Vocabulary::kUnk && token != "<unk>") continue;
    for (std::size_t c = 0; c < values.size(); ++c) table(id, static_cast<Eigen::Index>(c)) = values[c];
    ++matched;
  }
  return matched;
}

}  // namespace

Tensor2D Dan3Model::predict_proba(const std::vector<std::string>& texts) const {
  if (texts.empty()) return Tensor2D(0, static_cast<Eigen::Index>(labels.size()));
  std::array<nn::BatchNormLayer, 3> frozen = norms;
  DanCache cache;
  const Tensor2D logits = dan_forward(*this, frozen, vocab.encode(texts, config.max_seq_len), false, cache);
  nn::require_finite(logits, "classifier output");
  return nn::softmax(logits);
}

int Dan3Model::label_index(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

nlohmann::json Dan3Model::to_json() const {
  nlohmann::json hidden_json = nlohmann::json::array();
  nlohmann::json norm_json = nlohmann::json::array();
  for (std::size_t l = 0; l < 3; ++l) {
    hidden_json.push_back(dense_json(hidden[l]));
    norm_json.push_back({{"scale", nn::to_json(norms[l].scale)},
                         {"shift", nn::to_json(norms[l].shift)},
                         {"running_mean", nn::to_json(norms[l].running_mean)},
                         {"running_var", nn::to_json(norms[l].running_var)},
                         {"epsilon", norms[l].epsilon},
                         {"momentum", norms[l].momentum}});
  }
  return {{"kind", "dan3"},
          {"prng", kPrngId},
          {"config", config.to_json()},
          {"vocab", vocab.tokens()},
          {"labels", labels},
          {"embedding", nn::to_json(embedding.table)},
          {"hidden", hidden_json},
          {"norms", norm_json},
          {"output", dense_json(output)}};
}

Dan3Model Dan3Model::from_json(const nlohmann::json& j) {
  Dan3Model m;
  try {
    if (j.at("kind").get<std::string>() != "dan3") throw ValidationError("checkpoint is not a DAN 3 model");
    m.config = Dan3Config::from_json(j.at("config"));
    m.vocab = Vocabulary::from_tokens(j.at("vocab").get<std::vector<std::string>>());
    m.labels = j.at("labels").get<std::vector<std::string>>();
    m.embedding.table = nn::tensor_from_json(j.at("embedding"), "embedding");
    const auto& hidden_json = j.at("hidden");
    const auto& norm_json = j.at("norms");
    if (hidden_json.size() != 3 || norm_json.size() != 3) {
      throw ValidationError("DAN 3 checkpoint needs exactly 3 hidden layers");
    }
    for (std::size_t l = 0; l < 3; ++l) {
      const std::string name = "hidden[" + std::to_string(l) + "]";
      m.hidden[l] = dense_from_json(hidden_json[l], name);
      const auto& n = norm_json[l];
      m.norms[l].scale = nn::tensor_from_json(n.at("scale"), "norms.scale");
      m.norms[l].shift = nn::tensor_from_json(n.at("shift"), "norms.shift");
      m.norms[l].running_mean = nn::tensor_from_json(n.at("running_mean"), "norms.running_mean");
      m.norms[l].running_var = nn::tensor_from_json(n.at("running_var"), "norms.running_var");
      m.norms[l].epsilon = n.at("epsilon").get<double>();
      m.norms[l].momentum = n.at("momentum").get<double>();
    }
    m.output = dense_from_json(j.at("output"), "output");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("classifier checkpoint: ") + e.what());
  }
  bool ok = m.embedding.table.rows() == static_cast<Eigen::Index>(m.vocab.size()) &&
            m.output.out() == static_cast<Eigen::Index>(m.labels.size());
  Eigen::Index in = m.embedding.table.cols();
  for (std::size_t l = 0; ok && l < 3; ++l) {
    const Eigen::Index f = m.hidden[l].out();
    ok = m.hidden[l].in() == in && m.norms[l].scale.cols() == f && m.norms[l].shift.cols() == f &&
         m.norms[l].running_mean.cols() == f && m.norms[l].running_var.cols() == f;
    in = f;
  }
  ok = ok && m.output.in() == in;
  if (!ok) throw ValidationError("classifier checkpoint: inconsistent layer shapes");
  return m;
}

ClassifierSplit stratified_split(const std::vector<int>& labels, int classes, double test_fraction,
                                 std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test fraction must be in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= classes) throw ValidationError("label index out of range");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  SplitMix64 rng(seed);
  ClassifierSplit split;
  for (auto& members : by_class) {
    shuffle(members, rng);
    const auto n_test = static_cast<std::size_t>(
        std::ceil(test_fraction * static_cast<double>(members.size())));
    split.test.insert(split.test.end(), members.begin(),
                      members.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test),
                       members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

nlohmann::json ClassifierEvaluation::to_json() const {
  auto two = [](double v) { return std::round(v * 100.0) / 100.0; };
  return {{"accuracy", accuracy},
          {"classification_error_pct", two(classification_error_pct)},
          {"ece_pct", two(ece_pct)},
          {"mce_pct", two(mce_pct)},
          {"ece", reliability.ece},
          {"mce", reliability.mce},
          {"brier", brier},
          {"bins", reliability.m}};
}

ClassifierEvaluation evaluate_predictions(const losses::PredictionBatch& batch, int bins) {
  ClassifierEvaluation e;
  e.reliability = metrics::reliability(batch, bins);
  e.accuracy = metrics::accuracy(batch);
  e.classification_error_pct = 100.0 * (1.0 - e.accuracy);
  e.ece_pct = 100.0 * e.reliability.ece;
  e.mce_pct = 100.0 * e.reliability.mce;
  e.brier = metrics::brier(batch);
  return e;
}

Dan3TrainingResult train_dan3(const std::vector<LabeledText>& corpus, const Dan3Config& config) {
  config.validate();
  if (corpus.empty()) throw ValidationError("empty corpus");
  Dan3TrainingResult result;
  Dan3Model& model = result.model;
  model.config = config;

  std::set<std::string> label_set;
  for (const auto& doc : corpus) label_set.insert(doc.label);
  model.labels.assign(label_set.begin(), label_set.end());
  const int n_classes = static_cast<int>(model.labels.size());
  std::vector<int> labels;
  for (const auto& doc : corpus) labels.push_back(model.label_index(doc.label));

  result.split = stratified_split(labels, n_classes, config.test_fraction, config.seed);
  std::vector<std::size_t> train_per_class(model.labels.size(), 0);
  for (std::size_t i : result.split.train) ++train_per_class[static_cast<std::size_t>(labels[i])];
  for (std::size_t c = 0; c < train_per_class.size(); ++c) {
    if (train_per_class[c] == 0) {
      throw ValidationError("class absent from train split: " + model.labels[c]);
    }
  }
  if (n_classes < 2) throw ValidationError("need at least 2 classes in the train split");

  std::vector<std::string> train_texts;
  std::vector<int> train_labels;
  for (std::size_t i : result.split.train) {
    train_texts.push_back(corpus[i].text);
    train_labels.push_back(labels[i]);
  }
  std::vector<std::string> test_texts;
  std::vector<int> test_labels;
  for (std::size_t i : result.split.test) {
    test_texts.push_back(corpus[i].text);
    test_labels.push_back(labels[i]);
  }
  model.vocab = Vocabulary::build(train_texts);
  if (model.vocab.size() <= 2) throw ValidationError("empty vocabulary");

  SplitMix64 rng(config.seed);
  model.embedding =
      nn::EmbeddingLayer::create(static_cast<Eigen::Index>(model.vocab.size()), config.embed_dim, rng);
  Eigen::Index in = config.embed_dim;
  for (std::size_t l = 0; l < 3; ++l) {
    model.hidden[l] = nn::DenseLayer::create(in, config.hidden_dims[l], rng);
    model.norms[l] = nn::BatchNormLayer::create(config.hidden_dims[l]);
    in = config.hidden_dims[l];
  }
  model.output = nn::DenseLayer::create(in, n_classes, rng);
  if (config.embeddings_path) {
    const std::size_t matched = load_embeddings(*config.embeddings_path, model.vocab, model.embedding.table);
    result.warnings.push_back("embeddings: " + std::to_string(matched) + " of " +
                              std::to_string(model.vocab.size()) + " vocabulary rows loaded");
  }

  const nn::TokenMatrix train_ids = model.vocab.encode(train_texts, config.max_seq_len);
  const nn::TokenMatrix test_ids = model.vocab.encode(test_texts, config.max_seq_len);
  const std::size_t n_train = train_texts.size();
  if (n_train < 2) throw ValidationError("need at least 2 training documents");

  // Batch boundaries; a trailing batch of one is merged into its
  // predecessor because batch normalization needs two rows.
  std::vector<std::size_t> bounds;
  for (std::size_t s = 0; s < n_train; s += static_cast<std::size_t>(config.batch_size)) bounds.push_back(s);
  if (n_train - bounds.back() == 1 && bounds.size() > 1) bounds.pop_back();
  bounds.push_back(n_train);

  nn::Adam adam({config.learning_rate}, model.parameters());
  std::vector<std::size_t> order(n_train);
  for (std::size_t i = 0; i < n_train; ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(order, rng);
    double loss_sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
      const std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(bounds[b]),
                                          order.begin() + static_cast<std::ptrdiff_t>(bounds[b + 1]));
      const nn::TokenMatrix ids = select_rows(train_ids, rows);
      std::vector<int> y;
      for (std::size_t r : rows) y.push_back(train_labels[r]);
      DanCache cache;
      const Tensor2D logits = dan_forward(model, model.norms, ids, true, cache);
      const auto batch = losses::PredictionBatch::from_logits(logits, y);
      const auto loss = losses::evaluate(config.loss, batch);
      if (!std::isfinite(loss.value)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(b + 1));
      }
      loss_sum += loss.value * static_cast<double>(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        hits += metrics::argmax_row(batch.probs, static_cast<Eigen::Index>(i)) == y[i];
      }
      DanGrads grads(model);
      dan_backward(model, ids, cache, loss.grad_logits, grads);
      try {
        adam.step(model.parameters(), grads.list());
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + ", batch " + std::to_string(b + 1) +
                           ": " + e.what());
      }
    }
    const double n = static_cast<double>(n_train);
    result.log.push_back({epoch, "train", loss_sum / n, static_cast<double>(hits) / n});
    if (!test_texts.empty()) {
      const auto test_batch = losses::PredictionBatch{model.predict_proba(test_texts), test_labels};
      result.log.push_back({epoch, "test", losses::evaluate(config.loss, test_batch).value,
                            metrics::accuracy(test_batch)});
    }
  }
  result.test_batch = losses::PredictionBatch{model.predict_proba(test_texts), test_labels};
  result.test_evaluation = evaluate_predictions(result.test_batch, metrics::kDefaultBins);
  return result;
}

ClassifierEvaluation evaluate_classifier(const Dan3Model& model,
                                         const std::vector<LabeledText>& test_corpus, int bins) {
  if (test_corpus.empty()) throw ValidationError("empty test corpus");
  std::vector<std::string> texts;
  std::vector<int> labels;
  for (const auto& doc : test_corpus) {
    const int idx = model.label_index(doc.label);
    if (idx < 0) throw ValidationError("label unknown to the model: " + doc.label);
    texts.push_back(doc.text);
    labels.push_back(idx);
  }
  return evaluate_predictions({model.predict_proba(texts), labels}, bins);
}

void write_prediction_csv(std::ostream& out, const std::vector<std::size_t>& sample_ids,
                          const losses::PredictionBatch& batch) {
  if (sample_ids.size() != batch.size()) throw ValidationError("sample id count mismatch");
  out << "sample_id,true_label,pred_label";
  for (Eigen::Index c = 0; c < batch.classes(); ++c) out << ",p_" << c;
  out << '\n';
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out << sample_ids[i] << ',' << batch.labels[i] << ',' << metrics::argmax_row(batch.probs, r);
    for (Eigen::Index c = 0; c < batch.classes(); ++c) out << ',' << text::format_exact(batch.probs(r, c));
    out << '\n';
  }
}

PredictionDump read_prediction_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": missing header");
  const auto header = text::split_csv(text::clean_line(line));
  if (header.size() < 4 || header[0] != "sample_id" || header[1] != "true_label" ||
      header[2] != "pred_label") {
    throw ValidationError(path.string() + ": header must be sample_id,true_label,pred_label,p_0,...");
  }
  const std::size_t n_classes = header.size() - 3;
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (text::trim(header[c + 3]) != "p_" + std::to_string(c)) {
      throw ValidationError(path.string() + ": expected column p_" + std::to_string(c));
    }
  }
  PredictionDump dump;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cleaned = text::clean_line(line);
    if (text::trim(cleaned).empty()) continue;
    const auto cells = text::split_csv(cleaned);
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (cells.size() != header.size()) throw ValidationError(where + "wrong number of columns");
    const auto id = text::parse_int(text::trim(cells[0]));
    const auto label = text::parse_int(text::trim(cells[1]));
    const auto pred = text::parse_int(text::trim(cells[2]));
    if (!id || *id < 0) throw ValidationError(where + "invalid sample_id");
    const auto c_max = static_cast<long long>(n_classes);
    if (!label || *label < 0 || *label >= c_max) throw ValidationError(where + "true_label out of range");
    if (!pred || *pred < 0 || *pred >= c_max) throw ValidationError(where + "pred_label out of range");
    std::vector<double> p;
    double sum = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
      const auto v = text::parse_double(text::trim(cells[c + 3]));
      if (!v || *v < 0.0 || *v > 1.0) {
        throw ValidationError(where + "probability p_" + std::to_string(c) + " outside [0, 1]");
      }
      p.push_back(*v);
      sum += *v;
    }
    if (std::abs(sum - 1.0) > losses::PredictionBatch::kRowSumTolerance) {
      throw ValidationError(where + "probabilities do not sum to 1 (sample " + std::to_string(*id) + ")");
    }
    dump.sample_ids.push_back(static_cast<std::size_t>(*id));
    dump.batch.labels.push_back(static_cast<int>(*label));
    rows.push_back(std::move(p));
  }
  dump.batch.probs.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_classes));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < n_classes; ++c) {
      dump.batch.probs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return dump;
}

}  // namespace causal_calib::models
