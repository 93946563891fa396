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
#include <cstdint>
#include <vector>

#include "causal_calib/corpus.hpp"
#include "causal_calib/date.hpp"

/// Seeded generators for the Monte-Carlo harnesses. Every generator is a
/// pure function of its spec; all randomness comes from SplitMix64.
namespace causal_calib::synth {

struct VarSpec {
  std::size_t length = 2000;
  double phi_y = 0.5;
  double beta_x = 0.8;
  int lag_x = 3;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr std::size_t kBurnIn = 100;

struct CoupledSeries {
  std::vector<double> x;
  std::vector<double> y;
};

/// x_t iid N(0,1); y_t = phi_y y_{t-1} + beta_x x_{t-lag} + noise_sd e_t.
/// The first kBurnIn steps are simulated and discarded.
CoupledSeries gen_coupled_var(const VarSpec& spec);

/// Stationary AR(1) with standard normal shocks and burn-in.
std::vector<double> gen_ar1(std::size_t length, double phi, std::uint64_t seed);

std::vector<double> gen_white_noise(std::size_t length, std::uint64_t seed);

/// Cumulative sum of gen_white_noise(length, seed).
std::vector<double> gen_random_walk(std::size_t length, std::uint64_t seed);

struct KeywordCorpusSpec {
  int classes = 4;
  int keywords_per_class = 20;
  int docs_per_class = 500;
  int doc_len = 20;
  int filler_tokens = 50;
  /// Probability that a position holds a class keyword rather than filler.
  /// The first token is always a keyword.
  double keyword_fraction = 0.5;
  /// With this probability the label is redrawn uniformly over all classes.
  double label_noise_rate = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Labels are `class0`..`class{C-1}`, keywords `c{i}k{j}`, filler `f{j}`.
/// Documents are emitted class by class.
std::vector<LabeledText> gen_keyword_corpus(const KeywordCorpusSpec& spec);

struct VolatilitySentimentSpec {
  std::size_t length = 500;
  double persistence = 0.9;       ///< weight on vol_t
  double sentiment_weight = 0.1;  ///< weight on sent_t
  double level = 0.1;             ///< constant keeping the level near 1
  std::uint64_t seed = 0;
};

struct VolatilitySentimentSeries {
  std::vector<Date> dates;  ///< consecutive weekdays from 2020-01-01
  std::vector<double> volatility;
  std::vector<double> sentiment;
};

/// Noiseless vol_{t+1} = persistence vol_t + sentiment_weight sent_t +
/// level with sent_t iid uniform on [-1, 1) and vol_0 at its stationary
/// mean.
VolatilitySentimentSeries gen_volatility_sentiment(const VolatilitySentimentSpec& spec);

/// Consecutive weekdays starting at `start` (moved forward if a weekend).
std::vector<Date> business_days(Date start, std::size_t count);

}  // namespace causal_calib::synth
