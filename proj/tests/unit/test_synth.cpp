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
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "causal_calib/error.hpp"
#include "causal_calib/synth.hpp"

using namespace causal_calib;
using namespace causal_calib::synth;

namespace {

double autocorrelation(const std::vector<double>& v, std::size_t lag) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double num = 0, den = 0;
  for (std::size_t t = 0; t < v.size(); ++t) {
    den += (v[t] - mean) * (v[t] - mean);
    if (t >= lag) num += (v[t] - mean) * (v[t - lag] - mean);
  }
  return num / den;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("generators are pure functions of their spec") {
  VarSpec spec;
  spec.seed = 12;
  auto a = gen_coupled_var(spec);
  auto b = gen_coupled_var(spec);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.x.size() == 2000);
  spec.seed = 13;
  CHECK(gen_coupled_var(spec).x != a.x);
  CHECK(gen_white_noise(10, 4) == gen_white_noise(10, 4));
  CHECK(gen_white_noise(10, 4)[0] == gen_white_noise(20, 4)[0]);
  KeywordCorpusSpec cs;
  cs.docs_per_class = 10;
  auto c1 = gen_keyword_corpus(cs);
  auto c2 = gen_keyword_corpus(cs);
  REQUIRE(c1.size() == 40);
  for (std::size_t i = 0; i < c1.size(); ++i) {
    CHECK(c1[i].label == c2[i].label);
    CHECK(c1[i].text == c2[i].text);
  }
}

TEST_CASE("noiseless copy with unit coupling") {
  VarSpec spec;
  spec.phi_y = 0;
  spec.beta_x = 1;
  spec.noise_sd = 0;
  spec.lag_x = 3;
  spec.length = 300;
  auto s = gen_coupled_var(spec);
  for (std::size_t t = 3; t < s.y.size(); ++t) CHECK(s.y[t] == s.x[t - 3]);
}

TEST_CASE("coupled VAR autocorrelation") {
  VarSpec spec;
  spec.seed = 3;
  auto s = gen_coupled_var(spec);
  CHECK(std::abs(autocorrelation(s.y, 1) - 0.5) <= 0.1);
  CHECK(std::abs(autocorrelation(s.x, 1)) <= 0.1);
}

TEST_CASE("spec validation") {
  VarSpec bad;
  bad.phi_y = 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.phi_y = 0.5;
  bad.lag_x = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  KeywordCorpusSpec cs;
  cs.label_noise_rate = 1.5;
  CHECK_THROWS_AS(cs.validate(), ValidationError);
}

TEST_CASE("random walk differences recover the noise") {
  auto noise = gen_white_noise(500, 9);
  auto walk = gen_random_walk(500, 9);
  CHECK(walk[0] == noise[0]);
  for (std::size_t t = 1; t < walk.size(); ++t) {
    CHECK(walk[t] - walk[t - 1] == doctest::Approx(noise[t]).epsilon(1e-12));
  }
}

TEST_CASE("random walk variance grows linearly") {
  const std::size_t T = 400;
  std::vector<double> var_at(T, 0.0);
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    auto w = gen_random_walk(T, static_cast<std::uint64_t>(s));
    for (std::size_t t = 0; t < T; ++t) var_at[t] += w[t] * w[t] / seeds;
  }
  // E[W_t^2] = t + 1; the Monte-Carlo ratio has sd ~ sqrt(2 / 100).
  for (std::size_t t : {49u, 99u, 199u, 399u}) {
    CHECK(var_at[t] / static_cast<double>(t + 1) == doctest::Approx(1.0).epsilon(0.45));
  }
  double sxy = 0, sxx = 0;
  for (std::size_t t = 0; t < T; ++t) {
    sxy += static_cast<double>(t + 1) * var_at[t];
    sxx += static_cast<double>(t + 1) * static_cast<double>(t + 1);
  }
  CHECK(sxy / sxx == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("keyword corpus structure") {
  KeywordCorpusSpec cs;
  cs.docs_per_class = 50;
  auto corpus = gen_keyword_corpus(cs);
  REQUIRE(corpus.size() == 200);
  std::map<std::string, int> per_label;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& d = corpus[i];
    ++per_label[d.label];
    const std::string cls = std::to_string(i / 50);
    CHECK(d.label == "class" + cls);
    // Every keyword belongs to the document's class.
    std::size_t start = 0;
    int tokens = 0;
    while (start < d.text.size()) {
      const auto end = std::min(d.text.find(' ', start), d.text.size());
      const std::string tok = d.text.substr(start, end - start);
      if (tok[0] == 'c') CHECK(tok.rfind("c" + cls + "k", 0) == 0);
      if (tokens == 0) CHECK(tok[0] == 'c');
      ++tokens;
      start = end + 1;
    }
    CHECK(tokens == cs.doc_len);
  }
  CHECK(per_label.size() == 4);
}

TEST_CASE("label noise rates") {
  KeywordCorpusSpec cs;
  cs.classes = 4;
  cs.docs_per_class = 2500;
  cs.doc_len = 3;
  cs.label_noise_rate = 0.2;
  auto corpus = gen_keyword_corpus(cs);
  // The label matches the keyword class with probability 0.8 + 0.2 / 4.
  int agree = 0;
  for (const auto& d : corpus) agree += d.label.substr(5) == d.text.substr(1, d.text.find('k') - 1);
  CHECK(static_cast<double>(agree) / corpus.size() == doctest::Approx(0.85).epsilon(0.02));

  cs.classes = 2;
  cs.label_noise_rate = 1.0;
  corpus = gen_keyword_corpus(cs);
  agree = 0;
  for (const auto& d : corpus) agree += d.label.substr(5) == d.text.substr(1, d.text.find('k') - 1);
  CHECK(static_cast<double>(agree) / corpus.size() == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("volatility sentiment series follow the recursion") {
  VolatilitySentimentSpec spec;
  spec.seed = 5;
  auto s = gen_volatility_sentiment(spec);
  REQUIRE(s.volatility.size() == 500);
  CHECK(s.volatility[0] == doctest::Approx(1.0));
  for (std::size_t t = 0; t + 1 < 500; ++t) {
    CHECK(s.volatility[t + 1] == doctest::Approx(0.9 * s.volatility[t] + 0.1 * s.sentiment[t] + 0.1));
    CHECK(s.sentiment[t] >= -1.0);
    CHECK(s.sentiment[t] < 1.0);
  }
  CHECK(s.dates.front().iso() == "2020-01-01");
  for (const auto& d : s.dates) {
    CHECK(d.weekday() != std::chrono::Saturday);
    CHECK(d.weekday() != std::chrono::Sunday);
  }
}

TEST_CASE("business days skip weekends") {
  auto d = business_days(Date::parse("2023-03-11"), 3);
  CHECK(d[0].iso() == "2023-03-13");
  CHECK(d[2].iso() == "2023-03-15");
  auto f = business_days(Date::parse("2023-03-10"), 2);
  CHECK(f[1].iso() == "2023-03-13");
}

}  // TEST_SUITE
