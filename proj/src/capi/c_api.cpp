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

#include "causal_calib/c_api.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "causal_calib/causality.hpp"
#include "causal_calib/error.hpp"
#include "causal_calib/losses.hpp"
#include "causal_calib/metrics.hpp"
#include "causal_calib/models.hpp"
#include "causal_calib/pipeline.hpp"
#include "causal_calib/random.hpp"
#include "causal_calib/text.hpp"

namespace cc = causal_calib;

struct cc_context {
  std::string last_error;
  std::vector<std::string> warnings;
  cc_progress_fn progress = nullptr;
  void* progress_user = nullptr;
  std::vector<std::unique_ptr<std::string>> owned_strings;
};

struct cc_granger_report {
  cc::causality::GrangerReport report;
  std::string json;
};

struct cc_classifier {
  cc::models::Dan3Model model;
};

namespace {

/// Runs `fn`, converting exceptions into a status and a message on `ctx`.
template <class Fn>
cc_status guarded(cc_context* ctx, Fn&& fn) {
  if (ctx == nullptr) return CC_ERROR_VALIDATION;
  ctx->last_error.clear();
  ctx->warnings.clear();
  try {
    fn();
    return CC_OK;
  } catch (const cc::ValidationError& e) {
    ctx->last_error = e.what();
    return CC_ERROR_VALIDATION;
  } catch (const cc::IoError& e) {
    ctx->last_error = e.what();
    return CC_ERROR_IO;
  } catch (const cc::NumericError& e) {
    ctx->last_error = e.what();
    return CC_ERROR_NUMERIC;
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return CC_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = std::string("internal error: ") + e.what();
    return CC_ERROR_INTERNAL;
  } catch (...) {
    ctx->last_error = "internal error";
    return CC_ERROR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw cc::ValidationError(std::string(name) + " is required");
}

std::string str(const char* s, const char* name) {
  require(s, name);
  return s;
}

std::optional<std::filesystem::path> opt_path(const char* s) {
  if (s == nullptr || *s == '\0') return std::nullopt;
  return std::filesystem::path(s);
}

cc::pipeline::Reporter reporter_for(cc_context* ctx) {
  cc::pipeline::Reporter r;
  if (ctx->progress != nullptr) {
    r.on_progress = [ctx](std::string_view m) {
      const std::string line(m);
      ctx->progress(line.c_str(), ctx->progress_user);
    };
  }
  return r;
}

void collect(cc_context* ctx, cc::pipeline::Reporter& r) {
  ctx->warnings = std::move(r.warnings);
}

/// Runs a pipeline command; warnings survive a failure too.
template <class Fn>
cc_status run_command(cc_context* ctx, Fn&& fn) {
  cc::pipeline::Reporter reporter;
  const cc_status status = guarded(ctx, [&] {
    reporter = reporter_for(ctx);
    fn(reporter);
  });
  if (ctx != nullptr) collect(ctx, reporter);
  return status;
}

const char* keep(cc_context* ctx, std::string s) {
  ctx->owned_strings.push_back(std::make_unique<std::string>(std::move(s)));
  return ctx->owned_strings.back()->c_str();
}

cc::models::VolLstmConfig vol_config(const cc_vol_config& c) {
  cc::models::VolLstmConfig out;
  out.timesteps = c.timesteps;
  out.layers = c.layers;
  out.hidden = c.hidden;
  out.dropout = c.dropout;
  out.epochs = c.epochs;
  out.batch_size = c.batch_size;
  out.learning_rate = c.learning_rate;
  out.seed = c.seed;
  out.train_fraction = c.train_fraction;
  return out;
}

void fill_vol_config(const cc::models::VolLstmConfig& c, cc_vol_config& out) {
  out.timesteps = c.timesteps;
  out.layers = c.layers;
  out.hidden = c.hidden;
  out.dropout = c.dropout;
  out.epochs = c.epochs;
  out.batch_size = c.batch_size;
  out.learning_rate = c.learning_rate;
  out.seed = c.seed;
  out.train_fraction = c.train_fraction;
}

cc::models::Dan3Config classifier_config(const cc_classifier_config& c) {
  cc::models::Dan3Config out;
  out.embed_dim = c.embed_dim;
  out.hidden_dims = {c.hidden[0], c.hidden[1], c.hidden[2]};
  out.epochs = c.epochs;
  out.batch_size = c.batch_size;
  out.learning_rate = c.learning_rate;
  out.max_seq_len = c.max_seq_len;
  out.test_fraction = c.test_fraction;
  out.loss.kind = cc::losses::parse_loss_kind(str(c.loss, "loss"));
  out.loss.gamma = c.gamma;
  out.loss.lambda = c.lambda;
  out.seed = c.seed;
  out.embeddings_path = opt_path(c.embeddings);
  return out;
}

void fill_classifier_config(cc_context* ctx, const cc::models::Dan3Config& c, cc_classifier_config& out) {
  out.embed_dim = c.embed_dim;
  for (int i = 0; i < 3; ++i) out.hidden[i] = c.hidden_dims[static_cast<std::size_t>(i)];
  out.epochs = c.epochs;
  out.batch_size = c.batch_size;
  out.learning_rate = c.learning_rate;
  out.max_seq_len = c.max_seq_len;
  out.test_fraction = c.test_fraction;
  out.loss = keep(ctx, std::string(cc::losses::to_string(c.loss.kind)));
  out.gamma = c.loss.gamma;
  out.lambda = c.loss.lambda;
  out.seed = c.seed;
  out.embeddings = c.embeddings_path ? keep(ctx, c.embeddings_path->string()) : nullptr;
}

cc::losses::PredictionBatch batch_from(const double* values, const int* labels, size_t n, size_t classes) {
  require(values, "probabilities");
  require(labels, "labels");
  if (n == 0 || classes == 0) throw cc::ValidationError("empty batch");
  cc::losses::PredictionBatch b;
  b.probs = Eigen::Map<const cc::nn::Tensor2D>(values, static_cast<Eigen::Index>(n),
                                               static_cast<Eigen::Index>(classes));
  b.labels.assign(labels, labels + n);
  return b;
}

/// Reads only the keys in `allowed` from a JSON object of parameters.
class Params {
 public:
  Params(const char* json_text, std::vector<std::string> allowed) {
    if (json_text != nullptr && *json_text != '\0') {
      try {
        j_ = nlohmann::json::parse(json_text);
      } catch (const nlohmann::json::parse_error& e) {
        throw cc::ValidationError(std::string("synth parameters: ") + e.what());
      }
    }
    if (j_.is_null()) j_ = nlohmann::json::object();
    if (!j_.is_object()) throw cc::ValidationError("synth parameters must be a JSON object");
    for (const auto& [key, value] : j_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw cc::ValidationError("unknown synth parameter '" + key + "'");
      }
    }
  }

  template <class T>
  void get(const char* key, T& field) const {
    if (!j_.contains(key)) return;
    try {
      field = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw cc::ValidationError(std::string("synth parameter '") + key + "' has the wrong type");
    }
  }

 private:
  nlohmann::json j_;
};

}  // namespace

extern "C" {

const char* cc_version(void) { return "0.1.0"; }
const char* cc_prng_id(void) { return cc::kPrngId; }

cc_context* cc_context_new(void) { return new (std::nothrow) cc_context(); }
void cc_context_free(cc_context* ctx) { delete ctx; }

void cc_context_set_progress(cc_context* ctx, cc_progress_fn fn, void* user_data) {
  if (ctx == nullptr) return;
  ctx->progress = fn;
  ctx->progress_user = user_data;
}

const char* cc_last_error(const cc_context* ctx) { return ctx ? ctx->last_error.c_str() : "null context"; }

size_t cc_warning_count(const cc_context* ctx) { return ctx ? ctx->warnings.size() : 0; }

const char* cc_warning(const cc_context* ctx, size_t index) {
  if (ctx == nullptr || index >= ctx->warnings.size()) return nullptr;
  return ctx->warnings[index].c_str();
}

// ---------------------------------------------------------------------------

void cc_features_options_init(cc_features_options* opts) {
  if (opts == nullptr) return;
  const cc::features::FeatureConfig d;
  *opts = {nullptr, nullptr, d.momentum_period, d.return_horizon, d.volatility_window};
}

cc_status cc_run_features(cc_context* ctx, const cc_features_options* opts) {
  return run_command(ctx, [&](cc::pipeline::Reporter& r) {
    require(opts, "options");
    cc::pipeline::FeaturesOptions o;
    o.ohlcv = str(opts->ohlcv, "ohlcv");
    o.out = str(opts->out, "out");
    o.config = {opts->momentum_n, opts->return_horizon, opts->vol_window};
    cc::pipeline::run_features(o, r);
  });
}

void cc_sentiment_options_init(cc_sentiment_options* opts) {
  if (opts == nullptr) return;
  *opts = {nullptr, nullptr, nullptr, "next", nullptr};
}

cc_status cc_run_sentiment(cc_context* ctx, const cc_sentiment_options* opts) {
  return run_command(ctx, [&](cc::pipeline::Reporter& r) {
    require(opts, "options");
    cc::pipeline::SentimentOptions o;
    o.news = str(opts->news, "news");
    o.out = str(opts->out, "out");
    o.calendar = opt_path(opts->calendar);
    o.align = cc::ingest::parse_alignment_policy(str(opts->align, "align"));
    o.dump_records = opt_path(opts->dump_records);
    cc::pipeline::run_sentiment(o, r);
  });
}

void cc_causality_options_init(cc_causality_options* opts) {
  if (opts == nullptr) return;
  const cc::causality::SweepOptions d;
  *opts = {nullptr, nullptr, nullptr, nullptr, nullptr, d.max_lag, d.alpha, "unrestricted", 1, -1, 0};
}

cc_status cc_run_causality(cc_context* ctx, const cc_causality_options* opts) {
  return run_command(ctx, [&](cc::pipeline::Reporter& r) {
    require(opts, "options");
    cc::pipeline::CausalityOptions o;
    o.x = str(opts->x, "x");
    o.y = str(opts->y, "y");
    o.x_column = opts->x_column ? opts->x_column : "";
    o.y_column = opts->y_column ? opts->y_column : "";
    o.out = str(opts->out, "out");
    o.sweep.max_lag = opts->max_lag;
    o.sweep.alpha = opts->alpha;
    o.sweep.dof = cc::causality::parse_dof_convention(str(opts->dof, "dof"));
    o.sweep.threads = opts->threads;
    o.stationarity_gate = opts->stationarity_gate != 0;
    o.adf_max_lags = opts->adf_max_lags;
    cc::pipeline::run_causality(o, r);
  });
}

void cc_train_vol_options_init(cc_train_vol_options* opts) {
  if (opts == nullptr) return;
  opts->features = nullptr;
  opts->sentiment = nullptr;
  opts->target = "volatility";
  opts->use_sentiment = CC_SENTIMENT_WITH;
  fill_vol_config(cc::models::VolLstmConfig{}, opts->config);
  opts->out_dir = nullptr;
}

cc_status cc_load_vol_config(cc_context* ctx, const char* path, cc_vol_config* config) {
  return guarded(ctx, [&] {
    require(config, "config");
    auto c = vol_config(*config);
    cc::pipeline::apply_vol_overrides(c, cc::pipeline::read_json(str(path, "path")));
    fill_vol_config(c, *config);
  });
}

cc_status cc_run_train_vol(cc_context* ctx, const cc_train_vol_options* opts) {
  return run_command(ctx, [&](cc::pipeline::Reporter& r) {
    require(opts, "options");
    cc::pipeline::TrainVolOptions o;
    o.features = str(opts->features, "features");
    o.sentiment = opt_path(opts->sentiment);
    o.target = str(opts->target, "target");
    switch (opts->use_sentiment) {
      case CC_SENTIMENT_WITH: o.use = cc::pipeline::SentimentUse::kWith; break;
      case CC_SENTIMENT_WITHOUT: o.use = cc::pipeline::SentimentUse::kWithout; break;
      case CC_SENTIMENT_BOTH: o.use = cc::pipeline::SentimentUse::kBoth; break;
      default: throw cc::ValidationError("invalid use_sentiment value");
    }
    o.config = vol_config(opts->config);
    o.out_dir = str(opts->out_dir, "out_dir");
    cc::pipeline::run_train_vol(o, r);
  });
}

void cc_predict_vol_options_init(cc_predict_vol_options* opts) {
  if (opts == nullptr) return;
  *opts = {nullptr, nullptr, nullptr, "volatility", nullptr};
}

cc_status cc_run_predict_vol(cc_context* ctx, const cc_predict_vol_options* opts) {
  return run_command(ctx, [&](cc::pipeline::Reporter& r) {
    require(opts, "options");
    cc::pipeline::PredictVolOptions o;
    o.model = str(opts->model, "model");
    o.features = str(opts->features, "features");
    o.sentiment = opt_path(opts->sentiment);
    o.target = str(opts->target, "target");
    o.out = str(opts->out, "out");
    cc::pipeline::run_predict_vol(o, r);
  });
}

void cc_train_classifier_options_init(cc_train_classifier_options* opts) {
  if (opts == nullptr) return;
  const cc::models::Dan3Config d;
  opts->corpus = nullptr;
  opts->config.embed_dim = d.embed_dim;
  for (int i = 0; i < 3; ++i) opts->config.hidden[i] = d.hidden_dims[static_cast<std::size_t>(i)];
  opts->config.epochs = d.epochs;
  opts->config.batch_size = d.batch_size;
  opts->config.learning_rate = d.learning_rate;
  opts->config.max_seq_len = d.max_seq_len;
  opts->config.test_fraction = d.test_fraction;
  opts->config.loss = "fcl";
  opts->config.gamma = d.loss.gamma;
  opts->config.lambda = d.loss.lambda;
  opts->config.seed = d.seed;
  opts->config.embeddings = nullptr;
  opts->bins = cc::metrics::kDefaultBins;
  opts->out_dir = nullptr;
}

cc_status cc_load_classifier_config(cc_context* ctx, const char* path, cc_classifier_config* config) {
  return guarded(ctx, [&] {
    require(config, "config");
    auto c = classifier_config(*config);
    cc::pipeline::apply_classifier_overrides(c, cc::pipeline::read_json(str(path, "path")));
    fill_classifier_config(ctx, c, *config);
  });
}

cc_status cc_run_train_classifier(cc_context* ctx, const cc_train_classifier_options* opts) {
  return run_command(ctx, [&](cc::pipeline::Reporter& r) {
    require(opts, "options");
    cc::pipeline::TrainClassifierOptions o;
    o.corpus = str(opts->corpus, "corpus");
    o.config = classifier_config(opts->config);
    o.bins = opts->bins;
    o.out_dir = str(opts->out_dir, "out_dir");
    cc::pipeline::run_train_classifier(o, r);
  });
}

void cc_evaluate_classifier_options_init(cc_evaluate_classifier_options* opts) {
  if (opts == nullptr) return;
  *opts = {nullptr, nullptr, cc::metrics::kDefaultBins, nullptr};
}

cc_status cc_run_evaluate_classifier(cc_context* ctx, const cc_evaluate_classifier_options* opts) {
  return run_command(ctx, [&](cc::pipeline::Reporter& r) {
    require(opts, "options");
    cc::pipeline::EvaluateClassifierOptions o;
    o.model = str(opts->model, "model");
    o.corpus = str(opts->corpus, "corpus");
    o.bins = opts->bins;
    o.out_dir = str(opts->out_dir, "out_dir");
    cc::pipeline::run_evaluate_classifier(o, r);
  });
}

void cc_report_options_init(cc_report_options* opts) {
  if (opts == nullptr) return;
  *opts = {nullptr, cc::metrics::kDefaultBins, nullptr};
}

cc_status cc_run_report(cc_context* ctx, const cc_report_options* opts) {
  return run_command(ctx, [&](cc::pipeline::Reporter& r) {
    require(opts, "options");
    cc::pipeline::ReportOptions o;
    o.preds = str(opts->preds, "preds");
    o.bins = opts->bins;
    o.out = str(opts->out, "out");
    cc::pipeline::run_report(o, r);
  });
}

cc_status cc_run_synth(cc_context* ctx, const char* kind, const char* params_json, uint64_t seed,
                       const char* out) {
  return run_command(ctx, [&](cc::pipeline::Reporter& r) {
    const std::string k = str(kind, "kind");
    const std::filesystem::path target = str(out, "out");
    if (k == "var") {
      cc::synth::VarSpec spec;
      const Params p(params_json, {"length", "phi_y", "beta_x", "lag_x", "noise_sd"});
      p.get("length", spec.length);
      p.get("phi_y", spec.phi_y);
      p.get("beta_x", spec.beta_x);
      p.get("lag_x", spec.lag_x);
      p.get("noise_sd", spec.noise_sd);
      spec.seed = seed;
      cc::pipeline::run_synth_var(spec, target, r);
    } else if (k == "walk" || k == "noise" || k == "prices") {
      std::size_t length = 500;
      Params(params_json, {"length"}).get("length", length);
      if (k == "prices") {
        cc::pipeline::run_synth_prices(length, seed, target, r);
      } else {
        cc::pipeline::run_synth_series(k, length, seed, target, r);
      }
    } else if (k == "corpus") {
      cc::synth::KeywordCorpusSpec spec;
      const Params p(params_json, {"classes", "keywords_per_class", "docs_per_class", "doc_len",
                                   "filler_tokens", "keyword_fraction", "label_noise_rate"});
      p.get("classes", spec.classes);
      p.get("keywords_per_class", spec.keywords_per_class);
      p.get("docs_per_class", spec.docs_per_class);
      p.get("doc_len", spec.doc_len);
      p.get("filler_tokens", spec.filler_tokens);
      p.get("keyword_fraction", spec.keyword_fraction);
      p.get("label_noise_rate", spec.label_noise_rate);
      spec.seed = seed;
      cc::pipeline::run_synth_corpus(spec, target, r);
    } else if (k == "vol") {
      cc::synth::VolatilitySentimentSpec spec;
      const Params p(params_json, {"length", "persistence", "sentiment_weight", "level"});
      p.get("length", spec.length);
      p.get("persistence", spec.persistence);
      p.get("sentiment_weight", spec.sentiment_weight);
      p.get("level", spec.level);
      spec.seed = seed;
      cc::pipeline::run_synth_vol(spec, target, r);
    } else {
      throw cc::ValidationError("unknown generator '" + k +
                                "' (allowed: var, walk, noise, corpus, vol, prices)");
    }
  });
}

// ---------------------------------------------------------------------------

cc_status cc_adf(cc_context* ctx, const double* series, size_t n, int max_extra_lags, cc_adf_result* out) {
  return guarded(ctx, [&] {
    require(series, "series");
    require(out, "out");
    const auto r = cc::causality::adf_test(std::span<const double>(series, n), max_extra_lags);
    *out = {r.statistic,
            r.lags_used,
            r.n_obs,
            r.critical_values.one_pct,
            r.critical_values.five_pct,
            r.critical_values.ten_pct,
            r.reject_unit_root ? 1 : 0};
  });
}

cc_status cc_granger_sweep(cc_context* ctx, const double* y, const double* x, size_t n, int max_lag,
                           double alpha, cc_granger_report** out) {
  return guarded(ctx, [&] {
    require(y, "y");
    require(x, "x");
    require(out, "out");
    *out = nullptr;
    cc::causality::SweepOptions options;
    options.max_lag = max_lag;
    options.alpha = alpha;
    options.threads = 0;
    auto report = std::make_unique<cc_granger_report>();
    report->report = cc::causality::granger_sweep(std::span<const double>(y, n),
                                                  std::span<const double>(x, n), options);
    *out = report.release();
  });
}

void cc_granger_report_free(cc_granger_report* report) { delete report; }

const char* cc_granger_report_case(const cc_granger_report* report) {
  if (report == nullptr) return nullptr;
  return cc::causality::to_string(report->report.causal_case).data();
}

int cc_granger_report_max_lag(const cc_granger_report* report) {
  return report ? report->report.max_lag : 0;
}

cc_status cc_granger_report_lag(const cc_granger_report* report, int direction, int lag, double* f_stat,
                                double* p_value) {
  if (report == nullptr || (direction != 0 && direction != 1) || lag < 1 || lag > report->report.max_lag) {
    return CC_ERROR_VALIDATION;
  }
  const auto& results = direction == 0 ? report->report.direction_xy : report->report.direction_yx;
  const auto& r = results[static_cast<std::size_t>(lag - 1)];
  if (f_stat) *f_stat = r.f_stat;
  if (p_value) *p_value = r.p_value;
  return CC_OK;
}

const char* cc_granger_report_json(cc_granger_report* report) {
  if (report == nullptr) return nullptr;
  report->json = cc::text::dump_report(cc::causality::to_json(report->report));
  return report->json.c_str();
}

cc_status cc_loss(cc_context* ctx, const char* kind, double gamma, double lambda, const double* logits,
                  const int* labels, size_t n, size_t classes, double* value, double* grad_logits) {
  return guarded(ctx, [&] {
    require(value, "value");
    cc::losses::LossConfig config;
    config.kind = cc::losses::parse_loss_kind(str(kind, "kind"));
    config.gamma = gamma;
    config.lambda = lambda;
    config.validate();
    const auto raw = batch_from(logits, labels, n, classes);
    const auto batch = cc::losses::PredictionBatch::from_logits(raw.probs, raw.labels);
    batch.validate();
    const auto result = cc::losses::evaluate(config, batch);
    *value = result.value;
    if (grad_logits != nullptr) {
      std::memcpy(grad_logits, result.grad_logits.data(), sizeof(double) * n * classes);
    }
  });
}

cc_status cc_calibration_metrics(cc_context* ctx, const double* probs, const int* labels, size_t n,
                                 size_t classes, int bins, cc_calibration* out) {
  return guarded(ctx, [&] {
    require(out, "out");
    const auto batch = batch_from(probs, labels, n, classes);
    const auto rel = cc::metrics::reliability(batch, bins);
    *out = {rel.ece, rel.mce, cc::metrics::brier(batch), cc::metrics::accuracy(batch)};
  });
}

cc_status cc_classifier_load(cc_context* ctx, const char* checkpoint, cc_classifier** out) {
  return guarded(ctx, [&] {
    require(out, "out");
    *out = nullptr;
    auto model = std::make_unique<cc_classifier>();
    model->model = cc::models::Dan3Model::from_json(cc::pipeline::read_json(str(checkpoint, "checkpoint")));
    *out = model.release();
  });
}

void cc_classifier_free(cc_classifier* model) { delete model; }

size_t cc_classifier_classes(const cc_classifier* model) { return model ? model->model.labels.size() : 0; }

const char* cc_classifier_label(const cc_classifier* model, size_t index) {
  if (model == nullptr || index >= model->model.labels.size()) return nullptr;
  return model->model.labels[index].c_str();
}

cc_status cc_classifier_predict(cc_context* ctx, const cc_classifier* model, const char* const* texts,
                                size_t n, double* probs) {
  return guarded(ctx, [&] {
    require(model, "model");
    require(probs, "probs");
    if (n > 0) require(texts, "texts");
    std::vector<std::string> docs;
    for (size_t i = 0; i < n; ++i) docs.emplace_back(texts[i] ? texts[i] : "");
    const auto p = model->model.predict_proba(docs);
    std::memcpy(probs, p.data(), sizeof(double) * static_cast<std::size_t>(p.size()));
  });
}

}  // extern "C"
