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
#include <limits>

#include "causal_calib/error.hpp"
#include "causal_calib/nn.hpp"
#include "gradcheck.hpp"

using namespace causal_calib;
using namespace causal_calib::nn;
using cc_test::uniform_tensor;

TEST_SUITE("nn") {

TEST_CASE("dense forward examples") {
  SplitMix64 rng(1);
  DenseLayer l;
  l.weight = Tensor2D::Identity(3, 3);
  l.bias = Tensor2D::Zero(1, 3);
  const Tensor2D x = uniform_tensor(4, 3, rng);
  CHECK(dense_forward(l, x) == x);
  l.bias = uniform_tensor(1, 3, rng);
  const Tensor2D y = dense_forward(l, Tensor2D::Zero(2, 3));
  CHECK(y.row(0) == l.bias.row(0));
  CHECK(y.row(1) == l.bias.row(0));
  CHECK_THROWS_AS(dense_forward(l, Tensor2D::Zero(2, 4)), ValidationError);
}

TEST_CASE("dense gradients") {
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(cc_test::dense_gradient_error(s) <= 1e-5);
}

TEST_CASE("batch norm examples") {
  auto l = BatchNormLayer::create(2);
  Tensor2D x(4, 2);
  x << 3, -1, 3, 1, 3, -1, 3, 1;  // column 0 constant, column 1 zero mean unit variance
  BatchNormCache cache;
  Tensor2D y = batchnorm_forward(l, x, true, cache);
  for (int r = 0; r < 4; ++r) CHECK(y(r, 0) == 0.0);
  l = BatchNormLayer::create(2);
  l.shift(0, 1) = 2.5;
  y = batchnorm_forward(l, x, true, cache);
  CHECK(y.col(1).mean() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_THROWS_AS(batchnorm_forward(l, x.topRows(1), true, cache), ValidationError);
}

TEST_CASE("batch norm running statistics and inference") {
  auto l = BatchNormLayer::create(1);
  Tensor2D x(4, 1);
  x << 1, 2, 3, 4;
  BatchNormCache cache;
  batchnorm_forward(l, x, true, cache);
  CHECK(l.running_mean(0, 0) == doctest::Approx(0.9 * 0 + 0.1 * 2.5));
  CHECK(l.running_var(0, 0) == doctest::Approx(0.9 * 1 + 0.1 * (5.0 / 3.0)));
  const auto frozen = l;
  const Tensor2D y = batchnorm_forward(l, x, false, cache);
  CHECK(l.running_mean == frozen.running_mean);
  CHECK(y(0, 0) == doctest::Approx((1 - l.running_mean(0, 0)) / std::sqrt(l.running_var(0, 0) + 1e-5)));
}

TEST_CASE("batch norm gradients on 4x3 and random shapes") {
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(cc_test::batchnorm_gradient_error(s) <= 1e-4);
}

TEST_CASE("embedding mean examples") {
  EmbeddingLayer l;
  l.table.resize(4, 2);
  l.table << 0, 0, 0, 0, 1.5, -2, 3, 7;
  TokenMatrix ids(3, 3);
  ids << 2, 2, 0,  //
      0, 0, 0,     //
      2, 3, 0;
  const Tensor2D y = embedding_mean_forward(l, ids, 0);
  CHECK(y.row(0) == l.table.row(2));
  CHECK(y.row(1).isZero());
  CHECK(y(2, 0) == (1.5 + 3) / 2);
  CHECK(y(2, 1) == (-2 + 7) / 2.0);
  ids(0, 0) = 9;
  CHECK_THROWS_AS(embedding_mean_forward(l, ids, 0), ValidationError);
}

TEST_CASE("embedding gradients") {
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(cc_test::embedding_gradient_error(s) <= 1e-5);
}

TEST_CASE("LSTM with zero weights") {
  LstmLayer l;
  l.w_input = Tensor2D::Zero(8, 3);
  l.w_hidden = Tensor2D::Zero(8, 2);
  l.bias = Tensor2D::Zero(1, 8);
  SplitMix64 rng(2);
  LstmState prev{Tensor2D::Zero(1, 2), Tensor2D::Constant(1, 2, 0.8)};
  LstmStepCache cache;
  auto next = lstm_forward(l, uniform_tensor(1, 3, rng), prev, cache);
  CHECK(next.c(0, 0) == doctest::Approx(0.4));
  CHECK(next.h(0, 1) == doctest::Approx(0.5 * std::tanh(0.4)));
  auto zero = lstm_forward(LstmLayer::create(3, 2, rng), Tensor2D::Zero(1, 3), LstmState::zeros(1, 2), cache);
  CHECK(zero.h.isZero());
  CHECK(cache.zero_state);
}

TEST_CASE("LSTM forget bias initialisation") {
  SplitMix64 rng(3);
  auto l = LstmLayer::create(2, 4, rng);
  for (int j = 0; j < 4; ++j) {
    CHECK(l.bias(0, j) == 0.0);
    CHECK(l.bias(0, 4 + j) == 1.0);
  }
}

TEST_CASE("LSTM BPTT gradients over three steps") {
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(cc_test::lstm_gradient_error(s) <= 1e-4);
}

TEST_CASE("softmax") {
  Tensor2D z(3, 2);
  z << 0, 0, std::log(1.0), std::log(3.0), 1000, 1001;
  const Tensor2D p = softmax(z);
  CHECK(p(0, 0) == 0.5);
  CHECK(p(1, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p(1, 1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(std::isfinite(p(2, 0)));
  SplitMix64 rng(4);
  const Tensor2D r = uniform_tensor(20, 5, rng, 10);
  const Tensor2D pr = softmax(r);
  const Tensor2D shifted = softmax((r.array() + 37.0).matrix());
  for (int i = 0; i < 20; ++i) CHECK(std::abs(pr.row(i).sum() - 1.0) <= 1e-12);
  CHECK((pr - shifted).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("relu") {
  Tensor2D x(1, 3);
  x << -1, 0, 2;
  CHECK(relu(x) == (Tensor2D(1, 3) << 0, 0, 2).finished());
  CHECK(relu_backward(x, Tensor2D::Ones(1, 3)) == (Tensor2D(1, 3) << 0, 0, 1).finished());
}

TEST_CASE("dropout") {
  SplitMix64 rng(5);
  Tensor2D mask;
  const Tensor2D x = uniform_tensor(3, 4, rng);
  CHECK(dropout(x, 0.0, true, rng, mask) == x);
  CHECK(dropout(x, 0.7, false, rng, mask) == x);
  const Tensor2D ones = Tensor2D::Ones(1000, 100);
  const Tensor2D y = dropout(ones, 0.5, true, rng, mask);
  CHECK(std::abs(y.mean() - 1.0) <= 0.01);
  CHECK(((y.array() == 0.0) || (y.array() == 2.0)).all());
  CHECK_THROWS_AS(dropout(x, 1.0, true, rng, mask), ValidationError);
  SplitMix64 a(6), b(6);
  Tensor2D ma, mb;
  CHECK(dropout(ones, 0.3, true, a, ma) == dropout(ones, 0.3, true, b, mb));
}

TEST_CASE("Adam first step and symmetry") {
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  Tensor2D p(1, 3);
  p << 1.0, 1.0, 1.0;
  Tensor2D g(1, 3);
  g << 0.0, 0.3, 0.3;
  Adam opt(cfg, {&p});
  opt.step({&p}, {&g});
  CHECK(p(0, 0) == 1.0);
  CHECK(p(0, 1) == doctest::Approx(1.0 - 0.01 * 0.3 / (0.3 + 1e-8)).epsilon(1e-12));
  CHECK(p(0, 1) == p(0, 2));
  CHECK(opt.steps() == 1);

  Tensor2D q(1, 1);
  q << 5.0;
  Tensor2D gq(1, 1);
  gq << -4.0;
  Adam o2(cfg, {&q});
  o2.step({&q}, {&gq});
  CHECK(q(0, 0) == doctest::Approx(5.01).epsilon(1e-9));
}

TEST_CASE("Adam rejects non-finite gradients without touching state") {
  Tensor2D p = Tensor2D::Ones(1, 2);
  Tensor2D g(1, 2);
  g << 1.0, std::numeric_limits<double>::quiet_NaN();
  Adam opt(AdamConfig{}, {&p});
  CHECK_THROWS_AS(opt.step({&p}, {&g}), NumericError);
  CHECK(p == Tensor2D::Ones(1, 2));
  CHECK(opt.steps() == 0);
}

TEST_CASE("tensor JSON round-trip is bit exact") {
  SplitMix64 rng(7);
  const Tensor2D t = uniform_tensor(5, 7, rng, 1e3);
  const auto j = nlohmann::json::parse(to_json(t).dump());
  CHECK(tensor_from_json(j, "t") == t);
  auto bad = to_json(t);
  bad["rows"] = 4;
  CHECK_THROWS_AS(tensor_from_json(bad, "t"), ValidationError);
}

TEST_CASE("glorot bounds and seed determinism") {
  SplitMix64 a(8), b(8);
  const Tensor2D w = glorot_uniform(50, 30, 30, 50, a);
  CHECK(w.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 80));
  CHECK(w == glorot_uniform(50, 30, 30, 50, b));
  Tensor2D bad = Tensor2D::Zero(1, 1);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(require_finite(bad, "layer"), NumericError);
}

}  // TEST_SUITE
