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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "causal_calib/random.hpp"

/// Small neural toolkit with hand-derived gradients. Everything is 64-bit.
///
/// Layers are plain parameter records. Forward functions return outputs and
/// fill an explicit cache; backward functions read the cache, *accumulate*
/// parameter gradients into a record of the same type (see zeros_like) and
/// return the gradient with respect to the layer input.
namespace causal_calib::nn {

using Tensor2D = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using TokenMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Throws NumericError naming `where` if any entry is NaN or infinite.
void require_finite(const Tensor2D& t, std::string_view where);

/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
Tensor2D glorot_uniform(Eigen::Index rows, Eigen::Index cols, double fan_in, double fan_out,
                        SplitMix64& rng);

// ---------------------------------------------------------------------------

struct DenseLayer {
  Tensor2D weight;  ///< out x in
  Tensor2D bias;    ///< 1 x out

  static DenseLayer create(Eigen::Index in, Eigen::Index out, SplitMix64& rng);
  DenseLayer zeros_like() const;
  std::vector<Tensor2D*> parameters();
  std::vector<const Tensor2D*> parameters() const;
  Eigen::Index in() const { return weight.cols(); }
  Eigen::Index out() const { return weight.rows(); }
};

/// Y = X W^T + b.
Tensor2D dense_forward(const DenseLayer& layer, const Tensor2D& x);
Tensor2D dense_backward(const DenseLayer& layer, const Tensor2D& x, const Tensor2D& grad_out,
                        DenseLayer& grads);

// ---------------------------------------------------------------------------

struct BatchNormLayer {
  Tensor2D scale;         ///< 1 x F
  Tensor2D shift;         ///< 1 x F
  Tensor2D running_mean;  ///< 1 x F, not trained
  Tensor2D running_var;   ///< 1 x F, not trained
  double epsilon = 1e-5;
  double momentum = 0.1;

  static BatchNormLayer create(Eigen::Index features);
  BatchNormLayer zeros_like() const;
  /// Trainable parameters only (scale, shift).
  std::vector<Tensor2D*> parameters();
  std::vector<const Tensor2D*> parameters() const;
};

struct BatchNormCache {
  Tensor2D normalized;  ///< x_hat
  Tensor2D inv_std;     ///< 1 x F
  bool training = false;
};

/// Training mode normalises with the batch statistics and folds them into
/// the running estimates (unbiased variance); inference uses the running
/// estimates and leaves the layer untouched.
Tensor2D batchnorm_forward(BatchNormLayer& layer, const Tensor2D& x, bool training,
                           BatchNormCache& cache);
Tensor2D batchnorm_backward(const BatchNormLayer& layer, const BatchNormCache& cache,
                            const Tensor2D& grad_out, BatchNormLayer& grads);

// ---------------------------------------------------------------------------

struct EmbeddingLayer {
  Tensor2D table;  ///< vocab x dim

  /// Uniform in +-0.05.
  static EmbeddingLayer create(Eigen::Index vocab, Eigen::Index dim, SplitMix64& rng);
  EmbeddingLayer zeros_like() const;
  std::vector<Tensor2D*> parameters();
  std::vector<const Tensor2D*> parameters() const;
};

/// Mean of the embeddings of all non-pad ids in each row. A row made only
/// of padding maps to the zero vector.
Tensor2D embedding_mean_forward(const EmbeddingLayer& layer, const TokenMatrix& ids,
                                std::int32_t pad_id);
void embedding_mean_backward(const TokenMatrix& ids, std::int32_t pad_id,
                             const Tensor2D& grad_out, EmbeddingLayer& grads);

// ---------------------------------------------------------------------------

/// Gates are stacked in the order input, forget, candidate, output; each
/// block of H rows in `w_input`/`w_hidden`/`bias` belongs to one gate.
struct LstmLayer {
  Tensor2D w_input;   ///< 4H x in
  Tensor2D w_hidden;  ///< 4H x H
  Tensor2D bias;      ///< 1 x 4H

  static LstmLayer create(Eigen::Index in, Eigen::Index hidden, SplitMix64& rng,
                          double forget_bias = 1.0);
  LstmLayer zeros_like() const;
  std::vector<Tensor2D*> parameters();
  std::vector<const Tensor2D*> parameters() const;
  Eigen::Index in() const { return w_input.cols(); }
  Eigen::Index hidden() const { return w_hidden.cols(); }
};

struct LstmState {
  Tensor2D h;
  Tensor2D c;

  static LstmState zeros(Eigen::Index batch, Eigen::Index hidden);
};

struct LstmStepCache {
  Tensor2D x;
  Tensor2D h_prev;
  Tensor2D c_prev;
  Tensor2D input_gate;
  Tensor2D forget_gate;
  Tensor2D candidate;
  Tensor2D output_gate;
  Tensor2D tanh_c;
  bool zero_state = false;  ///< h_prev and c_prev are exactly zero
};

/// c_t = f * c_prev + i * g, h_t = o * tanh(c_t).
LstmState lstm_forward(const LstmLayer& layer, const Tensor2D& x, const LstmState& prev,
                       LstmStepCache& cache);

struct LstmStepGrads {
  Tensor2D x;
  Tensor2D h_prev;
  Tensor2D c_prev;
};

/// One step of backpropagation. `grad_h` / `grad_c` are the total
/// gradients reaching h_t and c_t.
LstmStepGrads lstm_step_backward(const LstmLayer& layer, const LstmStepCache& cache,
                                 const Tensor2D& grad_h, const Tensor2D& grad_c,
                                 LstmLayer& grads);

struct LstmSequenceCache {
  std::vector<LstmStepCache> steps;
};

/// Runs a whole sequence from the zero state and returns h_t for every t.
std::vector<Tensor2D> lstm_forward_sequence(const LstmLayer& layer,
                                            const std::vector<Tensor2D>& inputs,
                                            LstmSequenceCache& cache);

/// Backpropagation through time. `grad_hidden[t]` is the gradient of the
/// loss with respect to h_t coming from above (may be all zero). Returns
/// the gradient for every input.
std::vector<Tensor2D> lstm_backward_sequence(const LstmLayer& layer, const LstmSequenceCache& cache,
                                             const std::vector<Tensor2D>& grad_hidden,
                                             LstmLayer& grads);

// ---------------------------------------------------------------------------

/// Row-wise softmax with max subtraction.
Tensor2D softmax(const Tensor2D& logits);

Tensor2D relu(const Tensor2D& x);
Tensor2D relu_backward(const Tensor2D& x, const Tensor2D& grad_out);

/// Inverted dropout: in training each entry is zeroed with probability
/// `rate` and survivors are scaled by 1 / (1 - rate). `mask` receives the
/// multiplier applied to each entry (identity outside training).
Tensor2D dropout(const Tensor2D& x, double rate, bool training, SplitMix64& rng, Tensor2D& mask);

// ---------------------------------------------------------------------------

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers are shaped like the
/// parameters passed at construction and must be stepped with the same
/// list in the same order.
class Adam {
 public:
  Adam(AdamConfig config, const std::vector<Tensor2D*>& params);

  /// Rejects the whole step, touching nothing, if any gradient is not
  /// finite.
  void step(const std::vector<Tensor2D*>& params, const std::vector<const Tensor2D*>& grads);

  std::int64_t steps() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::int64_t step_ = 0;
  std::vector<Tensor2D> first_moment_;
  std::vector<Tensor2D> second_moment_;
};

// ---------------------------------------------------------------------------

/// {"rows": r, "cols": c, "data": [...]}; doubles are written in shortest
/// round-trip form so loading is bit-exact.
nlohmann::json to_json(const Tensor2D& t);
Tensor2D tensor_from_json(const nlohmann::json& j, std::string_view name);

}  // namespace causal_calib::nn
