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

#include "causal_calib/synth.hpp"

#include <cmath>
#include <string>

#include "causal_calib/error.hpp"
#include "causal_calib/random.hpp"

namespace causal_calib::synth {

void VarSpec::validate() const {
  if (length < 1) throw ValidationError("var spec: length must be >= 1");
  if (!(std::abs(phi_y) < 1.0)) throw ValidationError("var spec: |phi_y| must be < 1");
  if (lag_x < 1) throw ValidationError("var spec: lag_x must be >= 1");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw ValidationError("var spec: noise_sd must be finite and >= 0");
  }
  if (!std::isfinite(beta_x)) throw ValidationError("var spec: beta_x must be finite");
}

CoupledSeries gen_coupled_var(const VarSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  const std::size_t total = spec.length + kBurnIn;
  const auto lag = static_cast<std::size_t>(spec.lag_x);
  std::vector<double> x(total);
  std::vector<double> y(total);
  for (std::size_t t = 0; t < total; ++t) {
    x[t] = rng.normal();
    const double shock = rng.normal();
    const double own = t >= 1 ? spec.phi_y * y[t - 1] : 0.0;
    const double cross = t >= lag ? spec.beta_x * x[t - lag] : 0.0;
    y[t] = own + cross + spec.noise_sd * shock;
  }
  CoupledSeries out;
  out.x.assign(x.begin() + kBurnIn, x.end());
  out.y.assign(y.begin() + kBurnIn, y.end());
  return out;
}

std::vector<double> gen_ar1(std::size_t length, double phi, std::uint64_t seed) {
  if (!(std::abs(phi) < 1.0)) throw ValidationError("ar1: |phi| must be < 1");
  SplitMix64 rng(seed);
  std::vector<double> out;
  out.reserve(length);
  double y = 0.0;
  for (std::size_t t = 0; t < length + kBurnIn; ++t) {
    y = phi * y + rng.normal();
    if (t >= kBurnIn) out.push_back(y);
  }
  return out;
}

std::vector<double> gen_white_noise(std::size_t length, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> out(length);
  for (auto& v : out) v = rng.normal();
  return out;
}

std::vector<double> gen_random_walk(std::size_t length, std::uint64_t seed) {
  std::vector<double> out = gen_white_noise(length, seed);
  for (std::size_t t = 1; t < out.size(); ++t) out[t] += out[t - 1];
  return out;
}

void KeywordCorpusSpec::validate() const {
  if (classes < 2) throw ValidationError("corpus spec: classes must be >= 2");
  if (keywords_per_class < 1) throw ValidationError("corpus spec: keywords_per_class must be >= 1");
  if (docs_per_class < 1) throw ValidationError("corpus spec: docs_per_class must be >= 1");
  if (doc_len < 1) throw ValidationError("corpus spec: doc_len must be >= 1");
  if (filler_tokens < 1) throw ValidationError("corpus spec: filler_tokens must be >= 1");
  if (!(keyword_fraction >= 0.0 && keyword_fraction <= 1.0)) {
    throw ValidationError("corpus spec: keyword_fraction must be in [0, 1]");
  }
  if (!(label_noise_rate >= 0.0 && label_noise_rate <= 1.0)) {
    throw ValidationError("corpus spec: label_noise_rate must be in [0, 1]");
  }
}

std::vector<LabeledText> gen_keyword_corpus(const KeywordCorpusSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  const auto n_kw = static_cast<std::uint64_t>(spec.keywords_per_class);
  const auto n_fill = static_cast<std::uint64_t>(spec.filler_tokens);
  std::vector<LabeledText> out;
  out.reserve(static_cast<std::size_t>(spec.classes) * static_cast<std::size_t>(spec.docs_per_class));
  for (int c = 0; c < spec.classes; ++c) {
    const std::string prefix = "c" + std::to_string(c) + "k";
    for (int d = 0; d < spec.docs_per_class; ++d) {
      std::string doc;
      for (int pos = 0; pos < spec.doc_len; ++pos) {
        if (pos > 0) doc += ' ';
        if (pos == 0 || rng.uniform() < spec.keyword_fraction) {
          doc += prefix + std::to_string(rng.below(n_kw));
        } else {
          doc += "f" + std::to_string(rng.below(n_fill));
        }
      }
      int label = c;
      const double flip = rng.uniform();
      const auto redraw = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.classes)));
      if (flip < spec.label_noise_rate) label = redraw;
      out.push_back({"class" + std::to_string(label), std::move(doc)});
    }
  }
  return out;
}

VolatilitySentimentSeries gen_volatility_sentiment(const VolatilitySentimentSpec& spec) {
  if (spec.length < 2) throw ValidationError("volatility spec: length must be >= 2");
  if (!(std::abs(spec.persistence) < 1.0)) {
    throw ValidationError("volatility spec: |persistence| must be < 1");
  }
  SplitMix64 rng(spec.seed);
  VolatilitySentimentSeries out;
  out.dates = business_days(Date(2020, 1, 1), spec.length);
  out.volatility.resize(spec.length);
  out.sentiment.resize(spec.length);
  double vol = spec.level / (1.0 - spec.persistence);
  for (std::size_t t = 0; t < spec.length; ++t) {
    const double sent = rng.uniform(-1.0, 1.0);
    out.volatility[t] = vol;
    out.sentiment[t] = sent;
    vol = spec.persistence * vol + spec.sentiment_weight * sent + spec.level;
  }
  return out;
}

std::vector<Date> business_days(Date start, std::size_t count) {
  using std::chrono::Saturday;
  using std::chrono::Sunday;
  std::vector<Date> out;
  out.reserve(count);
  Date d = start;
  while (out.size() < count) {
    if (d.weekday() != Saturday && d.weekday() != Sunday) out.push_back(d);
    d = d.plus_days(1);
  }
  return out;
}

}  // namespace causal_calib::synth
