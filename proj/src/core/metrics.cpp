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

#include "causal_calib/metrics.hpp"

#include <cmath>
#include <sstream>

#include "causal_calib/error.hpp"
#include "causal_calib/text.hpp"

namespace causal_calib::metrics {

int argmax_row(const nn::Tensor2D& probs, Eigen::Index row) {
  int best = 0;
  for (Eigen::Index c = 1; c < probs.cols(); ++c) {
    if (probs(row, c) > probs(row, best)) best = static_cast<int>(c);
  }
  return best;
}

namespace {

// Bin m (0-based) covers (m/M, (m+1)/M]; edges are computed exactly as
// they are reported so membership and the printed interval agree.
int bin_of(double confidence, int m) {
  auto hi = [m](int b) { return static_cast<double>(b + 1) / m; };
  auto lo = [m](int b) { return static_cast<double>(b) / m; };
  int b = static_cast<int>(std::ceil(confidence * m)) - 1;
  b = std::clamp(b, 0, m - 1);
  while (b + 1 < m && confidence > hi(b)) ++b;
  while (b > 0 && confidence <= lo(b)) --b;
  return b;
}

}  // namespace

ReliabilityBins reliability(const PredictionBatch& batch, int m) {
  if (m < 1) throw ValidationError("reliability: bin count must be >= 1");
  if (batch.size() == 0) throw ValidationError("reliability: empty batch");
  batch.validate();
  ReliabilityBins out;
  out.m = m;
  out.bins.resize(static_cast<std::size_t>(m));
  std::vector<double> correct(out.bins.size(), 0.0);
  std::vector<double> conf_sum(out.bins.size(), 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const int pred = argmax_row(batch.probs, row);
    const double conf = batch.probs(row, pred);
    const auto b = static_cast<std::size_t>(bin_of(conf, m));
    ++out.bins[b].count;
    conf_sum[b] += conf;
    correct[b] += pred == batch.labels[i] ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(batch.size());
  for (std::size_t b = 0; b < out.bins.size(); ++b) {
    auto& bin = out.bins[b];
    bin.lo = static_cast<double>(b) / m;
    bin.hi = static_cast<double>(b + 1) / m;
    if (bin.count == 0) continue;
    const double count = static_cast<double>(bin.count);
    bin.accuracy = correct[b] / count;
    bin.confidence = conf_sum[b] / count;
    const double gap = std::abs(bin.accuracy - bin.confidence);
    out.ece += count / n * gap;
    out.mce = std::max(out.mce, gap);
  }
  return out;
}

double brier(const PredictionBatch& batch) {
  if (batch.size() == 0) throw ValidationError("brier: empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index c = 0; c < batch.classes(); ++c) {
      const double d = batch.probs(row, c) - (c == batch.labels[i] ? 1.0 : 0.0);
      total += d * d;
    }
  }
  return total / static_cast<double>(batch.size());
}

double accuracy(const PredictionBatch& batch) {
  if (batch.size() == 0) throw ValidationError("accuracy: empty batch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    hits += argmax_row(batch.probs, static_cast<Eigen::Index>(i)) == batch.labels[i];
  }
  return static_cast<double>(hits) / static_cast<double>(batch.size());
}

RegressionMetrics regression_metrics(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) {
    throw ValidationError("regression metrics: length mismatch (" + std::to_string(y.size()) +
                          " vs " + std::to_string(y_hat.size()) + ")");
  }
  if (y.empty()) throw ValidationError("regression metrics: empty input");
  const double n = static_cast<double>(y.size());
  RegressionMetrics m;
  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= n;
  double sst = 0.0;
  double ape = 0.0;
  bool zero_target = false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = y[i] - y_hat[i];
    m.mae += std::abs(e);
    m.mse += e * e;
    sst += (y[i] - mean_y) * (y[i] - mean_y);
    if (y[i] == 0.0) {
      zero_target = true;
    } else {
      ape += std::abs(e / y[i]);
    }
  }
  const double ssr = m.mse;
  m.mae /= n;
  m.mse /= n;
  m.rmse = std::sqrt(m.mse);
  if (zero_target) {
    m.warnings.emplace_back("MAPE undefined: some targets are zero");
  } else {
    m.mape = ape / n * 100.0;
  }
  if (sst == 0.0) {
    m.warnings.emplace_back("R2 undefined: targets have zero variance");
  } else {
    m.r2 = 1.0 - ssr / sst;
  }
  return m;
}

InformationCriteria information_criteria(const causality::OlsFit& fit) {
  const double k = static_cast<double>(fit.n_params);
  return {2.0 * k - 2.0 * fit.log_likelihood,
          std::log(static_cast<double>(fit.n_obs)) * k - 2.0 * fit.log_likelihood};
}

nlohmann::json to_json(const ReliabilityBins& r) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : r.bins) {
    bins.push_back({{"lo", b.lo},
                    {"hi", b.hi},
                    {"count", b.count},
                    {"acc", b.accuracy},
                    {"conf", b.confidence}});
  }
  return {{"m", r.m}, {"ece", r.ece}, {"mce", r.mce}, {"bins", bins}};
}

nlohmann::json to_json(const RegressionMetrics& m) {
  nlohmann::json j = {{"mae", m.mae}, {"mse", m.mse}, {"rmse", m.rmse}};
  j["mape"] = m.mape ? nlohmann::json(*m.mape) : nlohmann::json(nullptr);
  j["r2"] = m.r2 ? nlohmann::json(*m.r2) : nlohmann::json(nullptr);
  return j;
}

std::string reliability_csv(const ReliabilityBins& r) {
  std::ostringstream out;
  out << "lo,hi,count,acc,conf\n";
  for (const auto& b : r.bins) {
    out << text::format_sig(b.lo) << ',' << text::format_sig(b.hi) << ',' << b.count << ','
        << text::format_sig(b.accuracy) << ',' << text::format_sig(b.confidence) << '\n';
  }
  return out.str();
}

}  // namespace causal_calib::metrics
