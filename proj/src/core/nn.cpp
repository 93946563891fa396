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

#include "causal_calib/nn.hpp"

#include <cmath>
#include <string>

#include "causal_calib/error.hpp"

namespace causal_calib::nn {

namespace {

std::string shape(const Tensor2D& t) {
  return std::to_string(t.rows()) + "x" + std::to_string(t.cols());
}

void require_cols(const Tensor2D& x, Eigen::Index cols, std::string_view where) {
  if (x.cols() != cols) {
    throw ValidationError(std::string(where) + ": expected " + std::to_string(cols) +
                          " input columns, got " + shape(x));
  }
}

void require_same_shape(const Tensor2D& a, const Tensor2D& b, std::string_view where) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(where) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

bool all_zero(const Tensor2D& t) { return (t.array() == 0.0).all(); }

Tensor2D sigmoid(const Tensor2D& z) { return (1.0 / (1.0 + (-z.array()).exp())).matrix(); }

}  // namespace

void require_finite(const Tensor2D& t, std::string_view where) {
  if (!t.allFinite()) {
    throw NumericError(std::string(where) + ": non-finite value produced");
  }
}

Tensor2D glorot_uniform(Eigen::Index rows, Eigen::Index cols, double fan_in, double fan_out,
                        SplitMix64& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  Tensor2D t(rows, cols);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(-limit, limit);
  return t;
}

// ---------------------------------------------------------------------------

DenseLayer DenseLayer::create(Eigen::Index in, Eigen::Index out, SplitMix64& rng) {
  DenseLayer l;
  l.weight = glorot_uniform(out, in, static_cast<double>(in), static_cast<double>(out), rng);
  l.bias = Tensor2D::Zero(1, out);
  return l;
}

DenseLayer DenseLayer::zeros_like() const {
  return {Tensor2D::Zero(weight.rows(), weight.cols()), Tensor2D::Zero(1, bias.cols())};
}

std::vector<Tensor2D*> DenseLayer::parameters() { return {&weight, &bias}; }
std::vector<const Tensor2D*> DenseLayer::parameters() const { return {&weight, &bias}; }

Tensor2D dense_forward(const DenseLayer& layer, const Tensor2D& x) {
  require_cols(x, layer.in(), "dense");
  Tensor2D y = x * layer.weight.transpose();
  y.rowwise() += layer.bias.row(0);
  require_finite(y, "dense");
  return y;
}

Tensor2D dense_backward(const DenseLayer& layer, const Tensor2D& x, const Tensor2D& grad_out,
                        DenseLayer& grads) {
  if (grad_out.rows() != x.rows() || grad_out.cols() != layer.out()) {
    throw ValidationError("dense backward: gradient shape " + shape(grad_out));
  }
  grads.weight.noalias() += grad_out.transpose() * x;
  grads.bias += grad_out.colwise().sum();
  return grad_out * layer.weight;
}

// ---------------------------------------------------------------------------

BatchNormLayer BatchNormLayer::create(Eigen::Index features) {
  BatchNormLayer l;
  l.scale = Tensor2D::Ones(1, features);
  l.shift = Tensor2D::Zero(1, features);
  l.running_mean = Tensor2D::Zero(1, features);
  l.running_var = Tensor2D::Ones(1, features);
  return l;
}

BatchNormLayer BatchNormLayer::zeros_like() const {
  BatchNormLayer g = *this;
  g.scale.setZero();
  g.shift.setZero();
  g.running_mean.setZero();
  g.running_var.setZero();
  return g;
}

std::vector<Tensor2D*> BatchNormLayer::parameters() { return {&scale, &shift}; }
std::vector<const Tensor2D*> BatchNormLayer::parameters() const { return {&scale, &shift}; }

Tensor2D batchnorm_forward(BatchNormLayer& layer, const Tensor2D& x, bool training,
                           BatchNormCache& cache) {
  require_cols(x, layer.scale.cols(), "batchnorm");
  const Eigen::Index n = x.rows();
  cache.training = training;
  if (training) {
    if (n < 2) throw ValidationError("batchnorm: training needs a batch of at least 2 rows");
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Tensor2D centered = x.rowwise() - mean;
    const Eigen::RowVectorXd var = centered.array().square().colwise().mean();
    cache.inv_std = (var.array() + layer.epsilon).rsqrt().matrix();
    cache.normalized = centered.array().rowwise() * cache.inv_std.row(0).array();
    const double m = layer.momentum;
    layer.running_mean = (1.0 - m) * layer.running_mean + m * mean;
    layer.running_var =
        (1.0 - m) * layer.running_var + m * var * (static_cast<double>(n) / static_cast<double>(n - 1));
  } else {
    cache.inv_std = (layer.running_var.array() + layer.epsilon).rsqrt().matrix();
    cache.normalized = (x.rowwise() - layer.running_mean.row(0)).array().rowwise() *
                       cache.inv_std.row(0).array();
  }
  Tensor2D y = cache.normalized.array().rowwise() * layer.scale.row(0).array();
  y.rowwise() += layer.shift.row(0);
  require_finite(y, "batchnorm");
  return y;
}

Tensor2D batchnorm_backward(const BatchNormLayer& layer, const BatchNormCache& cache,
                            const Tensor2D& grad_out, BatchNormLayer& grads) {
  require_same_shape(grad_out, cache.normalized, "batchnorm backward");
  grads.scale += (grad_out.array() * cache.normalized.array()).colwise().sum().matrix();
  grads.shift += grad_out.colwise().sum();
  const Tensor2D d_norm = grad_out.array().rowwise() * layer.scale.row(0).array();
  if (!cache.training) {
    return d_norm.array().rowwise() * cache.inv_std.row(0).array();
  }
  const double n = static_cast<double>(grad_out.rows());
  const Eigen::RowVectorXd sum_d = d_norm.colwise().sum();
  const Eigen::RowVectorXd sum_dx = (d_norm.array() * cache.normalized.array()).colwise().sum();
  Tensor2D dx = (n * d_norm).rowwise() - sum_d;
  dx -= (cache.normalized.array().rowwise() * sum_dx.array()).matrix();
  return (dx.array().rowwise() * (cache.inv_std.row(0).array() / n)).matrix();
}

// ---------------------------------------------------------------------------

EmbeddingLayer EmbeddingLayer::create(Eigen::Index vocab, Eigen::Index dim, SplitMix64& rng) {
  EmbeddingLayer l;
  l.table.resize(vocab, dim);
  for (Eigen::Index i = 0; i < l.table.size(); ++i) l.table.data()[i] = rng.uniform(-0.05, 0.05);
  return l;
}

EmbeddingLayer EmbeddingLayer::zeros_like() const {
  return {Tensor2D::Zero(table.rows(), table.cols())};
}

std::vector<Tensor2D*> EmbeddingLayer::parameters() { return {&table}; }
std::vector<const Tensor2D*> EmbeddingLayer::parameters() const { return {&table}; }

Tensor2D embedding_mean_forward(const EmbeddingLayer& layer, const TokenMatrix& ids,
                                std::int32_t pad_id) {
  const Eigen::Index vocab = layer.table.rows();
  Tensor2D out = Tensor2D::Zero(ids.rows(), layer.table.cols());
  for (Eigen::Index r = 0; r < ids.rows(); ++r) {
    int count = 0;
    for (Eigen::Index c = 0; c < ids.cols(); ++c) {
      const std::int32_t id = ids(r, c);
      if (id == pad_id) continue;
      if (id < 0 || id >= vocab) {
        throw ValidationError("embedding: token id " + std::to_string(id) + " out of range [0, " +
                              std::to_string(vocab) + ")");
      }
      out.row(r) += layer.table.row(id);
      ++count;
    }
    if (count > 0) out.row(r) /= static_cast<double>(count);
  }
  require_finite(out, "embedding");
  return out;
}

void embedding_mean_backward(const TokenMatrix& ids, std::int32_t pad_id,
                             const Tensor2D& grad_out, EmbeddingLayer& grads) {
  for (Eigen::Index r = 0; r < ids.rows(); ++r) {
    int count = 0;
    for (Eigen::Index c = 0; c < ids.cols(); ++c) count += ids(r, c) != pad_id;
    if (count == 0) continue;
    const double inv = 1.0 / count;
    for (Eigen::Index c = 0; c < ids.cols(); ++c) {
      const std::int32_t id = ids(r, c);
      if (id != pad_id) grads.table.row(id) += inv * grad_out.row(r);
    }
  }
}

// ---------------------------------------------------------------------------

LstmLayer LstmLayer::create(Eigen::Index in, Eigen::Index hidden, SplitMix64& rng,
                            double forget_bias) {
  LstmLayer l;
  // Fans are those of one gate acting on the concatenated [x, h] input.
  const double fan_in = static_cast<double>(in + hidden);
  const double fan_out = static_cast<double>(hidden);
  l.w_input = glorot_uniform(4 * hidden, in, fan_in, fan_out, rng);
  l.w_hidden = glorot_uniform(4 * hidden, hidden, fan_in, fan_out, rng);
  l.bias = Tensor2D::Zero(1, 4 * hidden);
  l.bias.middleCols(hidden, hidden).setConstant(forget_bias);
  return l;
}

LstmLayer LstmLayer::zeros_like() const {
  return {Tensor2D::Zero(w_input.rows(), w_input.cols()),
          Tensor2D::Zero(w_hidden.rows(), w_hidden.cols()), Tensor2D::Zero(1, bias.cols())};
}

std::vector<Tensor2D*> LstmLayer::parameters() { return {&w_input, &w_hidden, &bias}; }
std::vector<const Tensor2D*> LstmLayer::parameters() const {
  return {&w_input, &w_hidden, &bias};
}

LstmState LstmState::zeros(Eigen::Index batch, Eigen::Index hidden) {
  return {Tensor2D::Zero(batch, hidden), Tensor2D::Zero(batch, hidden)};
}

LstmState lstm_forward(const LstmLayer& layer, const Tensor2D& x, const LstmState& prev,
                       LstmStepCache& cache) {
  const Eigen::Index h = layer.hidden();
  require_cols(x, layer.in(), "lstm");
  require_cols(prev.h, h, "lstm state h");
  require_cols(prev.c, h, "lstm state c");
  if (prev.h.rows() != x.rows() || prev.c.rows() != x.rows()) {
    throw ValidationError("lstm: state batch size differs from input");
  }
  cache.x = x;
  cache.h_prev = prev.h;
  cache.c_prev = prev.c;
  cache.zero_state = all_zero(prev.h) && all_zero(prev.c);

  Tensor2D z = x * layer.w_input.transpose();
  if (!cache.zero_state) z.noalias() += prev.h * layer.w_hidden.transpose();
  z.rowwise() += layer.bias.row(0);

  cache.input_gate = sigmoid(z.middleCols(0, h));
  cache.forget_gate = sigmoid(z.middleCols(h, h));
  cache.candidate = z.middleCols(2 * h, h).array().tanh().matrix();
  cache.output_gate = sigmoid(z.middleCols(3 * h, h));

  LstmState next;
  next.c = (cache.forget_gate.array() * prev.c.array() +
            cache.input_gate.array() * cache.candidate.array())
               .matrix();
  cache.tanh_c = next.c.array().tanh().matrix();
  next.h = (cache.output_gate.array() * cache.tanh_c.array()).matrix();
  require_finite(next.h, "lstm");
  require_finite(next.c, "lstm");
  return next;
}

LstmStepGrads lstm_step_backward(const LstmLayer& layer, const LstmStepCache& cache,
                                 const Tensor2D& grad_h, const Tensor2D& grad_c,
                                 LstmLayer& grads) {
  const Eigen::Index h = layer.hidden();
  require_same_shape(grad_h, cache.tanh_c, "lstm backward h");
  require_same_shape(grad_c, cache.tanh_c, "lstm backward c");
  const auto& i = cache.input_gate.array();
  const auto& f = cache.forget_gate.array();
  const auto& g = cache.candidate.array();
  const auto& o = cache.output_gate.array();
  const auto& tc = cache.tanh_c.array();

  const Eigen::ArrayXXd dc = grad_c.array() + grad_h.array() * o * (1.0 - tc.square());
  Tensor2D dz(grad_h.rows(), 4 * h);
  dz.middleCols(0, h) = (dc * g * i * (1.0 - i)).matrix();
  dz.middleCols(h, h) = (dc * cache.c_prev.array() * f * (1.0 - f)).matrix();
  dz.middleCols(2 * h, h) = (dc * i * (1.0 - g.square())).matrix();
  dz.middleCols(3 * h, h) = (grad_h.array() * tc * o * (1.0 - o)).matrix();

  grads.w_input.noalias() += dz.transpose() * cache.x;
  grads.bias += dz.colwise().sum();
  LstmStepGrads out;
  out.x = dz * layer.w_input;
  if (cache.zero_state) {
    out.h_prev = Tensor2D::Zero(grad_h.rows(), h);
  } else {
    grads.w_hidden.noalias() += dz.transpose() * cache.h_prev;
    out.h_prev = dz * layer.w_hidden;
  }
  out.c_prev = (dc * f).matrix();
  return out;
}

std::vector<Tensor2D> lstm_forward_sequence(const LstmLayer& layer,
                                            const std::vector<Tensor2D>& inputs,
                                            LstmSequenceCache& cache) {
  if (inputs.empty()) throw ValidationError("lstm: empty sequence");
  cache.steps.assign(inputs.size(), {});
  LstmState state = LstmState::zeros(inputs.front().rows(), layer.hidden());
  std::vector<Tensor2D> out;
  out.reserve(inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    state = lstm_forward(layer, inputs[t], state, cache.steps[t]);
    out.push_back(state.h);
  }
  return out;
}

std::vector<Tensor2D> lstm_backward_sequence(const LstmLayer& layer, const LstmSequenceCache& cache,
                                             const std::vector<Tensor2D>& grad_hidden,
                                             LstmLayer& grads) {
  if (grad_hidden.size() != cache.steps.size()) {
    throw ValidationError("lstm backward: expected one gradient per time step");
  }
  const std::size_t steps = cache.steps.size();
  std::vector<Tensor2D> grad_inputs(steps);
  const Eigen::Index batch = grad_hidden.front().rows();
  Tensor2D dh_next = Tensor2D::Zero(batch, layer.hidden());
  Tensor2D dc_next = Tensor2D::Zero(batch, layer.hidden());
  for (std::size_t t = steps; t-- > 0;) {
    const Tensor2D dh = grad_hidden[t] + dh_next;
    LstmStepGrads g = lstm_step_backward(layer, cache.steps[t], dh, dc_next, grads);
    grad_inputs[t] = std::move(g.x);
    dh_next = std::move(g.h_prev);
    dc_next = std::move(g.c_prev);
  }
  return grad_inputs;
}

// ---------------------------------------------------------------------------

Tensor2D softmax(const Tensor2D& logits) {
  require_finite(logits, "softmax input");
  Tensor2D out = logits.colwise() - logits.rowwise().maxCoeff();
  out = out.array().exp().matrix();
  out.array().colwise() /= out.rowwise().sum().array();
  return out;
}

Tensor2D relu(const Tensor2D& x) { return x.cwiseMax(0.0); }

Tensor2D relu_backward(const Tensor2D& x, const Tensor2D& grad_out) {
  require_same_shape(x, grad_out, "relu backward");
  return (x.array() > 0.0).select(grad_out, 0.0);
}

Tensor2D dropout(const Tensor2D& x, double rate, bool training, SplitMix64& rng, Tensor2D& mask) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ValidationError("dropout rate must be in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) {
    mask = Tensor2D::Ones(x.rows(), x.cols());
    return x;
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  mask.resize(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = rng.uniform() < rate ? 0.0 : keep_scale;
  }
  return x.cwiseProduct(mask);
}

// ---------------------------------------------------------------------------

Adam::Adam(AdamConfig config, const std::vector<Tensor2D*>& params) : config_(config) {
  first_moment_.reserve(params.size());
  second_moment_.reserve(params.size());
  for (const Tensor2D* p : params) {
    first_moment_.push_back(Tensor2D::Zero(p->rows(), p->cols()));
    second_moment_.push_back(Tensor2D::Zero(p->rows(), p->cols()));
  }
}

void Adam::step(const std::vector<Tensor2D*>& params, const std::vector<const Tensor2D*>& grads) {
  if (params.size() != first_moment_.size() || grads.size() != params.size()) {
    throw ValidationError("adam: parameter list does not match the optimiser state");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    require_same_shape(*params[k], first_moment_[k], "adam parameter");
    require_same_shape(*grads[k], first_moment_[k], "adam gradient");
    if (!grads[k]->allFinite()) {
      throw NumericError("adam: non-finite gradient for parameter #" + std::to_string(k) +
                         " at step " + std::to_string(step_ + 1));
    }
  }
  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto m = first_moment_[k].array();
    auto v = second_moment_[k].array();
    const auto g = grads[k]->array();
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.square();
    params[k]->array() -=
        config_.learning_rate * (m / correction1) / ((v / correction2).sqrt() + config_.epsilon);
  }
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const Tensor2D& t) {
  return {{"rows", t.rows()},
          {"cols", t.cols()},
          {"data", std::vector<double>(t.data(), t.data() + t.size())}};
}

Tensor2D tensor_from_json(const nlohmann::json& j, std::string_view name) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
      throw ValidationError("tensor '" + std::string(name) + "': data length does not match shape");
    }
    Tensor2D t(rows, cols);
    std::copy(data.begin(), data.end(), t.data());
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("tensor '" + std::string(name) + "': " + e.what());
  }
}

}  // namespace causal_calib::nn
