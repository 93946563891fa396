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

/* C interface to causal-calib. Every function reports failure through a
 * cc_status; the message of the most recent failure on a context is
 * available from cc_last_error. Strings returned by the library stay valid
 * until the next call on the same context (or handle) or until it is
 * freed. */

#ifndef CAUSAL_CALIB_C_API_H_
#define CAUSAL_CALIB_C_API_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CC_API __declspec(dllexport)
#else
#define CC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cc_status {
  CC_OK = 0,
  CC_ERROR_NUMERIC = 1,    /* non-finite values, rank deficiency */
  CC_ERROR_VALIDATION = 2, /* bad input data or option value */
  CC_ERROR_IO = 3,         /* missing or unwritable file */
  CC_ERROR_INTERNAL = 4
} cc_status;

typedef struct cc_context cc_context;

/* Called with one human-readable line per progress event. */
typedef void (*cc_progress_fn)(const char* message, void* user_data);

CC_API const char* cc_version(void);
CC_API const char* cc_prng_id(void);

CC_API cc_context* cc_context_new(void);
CC_API void cc_context_free(cc_context* ctx);
CC_API void cc_context_set_progress(cc_context* ctx, cc_progress_fn fn, void* user_data);
CC_API const char* cc_last_error(const cc_context* ctx);
/* Warnings collected by the most recent call. */
CC_API size_t cc_warning_count(const cc_context* ctx);
CC_API const char* cc_warning(const cc_context* ctx, size_t index);

/* ---------------------------------------------------------------------
 * Commands. Each options struct must be filled by its _init function
 * first; string members are borrowed and may be NULL where optional. */

typedef struct cc_features_options {
  const char* ohlcv;
  const char* out;
  int momentum_n;
  int return_horizon;
  int vol_window;
} cc_features_options;

CC_API void cc_features_options_init(cc_features_options* opts);
CC_API cc_status cc_run_features(cc_context* ctx, const cc_features_options* opts);

typedef struct cc_sentiment_options {
  const char* news;
  const char* out;
  const char* calendar;     /* optional */
  const char* align;        /* "next" | "prev" | "drop" */
  const char* dump_records; /* optional */
} cc_sentiment_options;

CC_API void cc_sentiment_options_init(cc_sentiment_options* opts);
CC_API cc_status cc_run_sentiment(cc_context* ctx, const cc_sentiment_options* opts);

typedef struct cc_causality_options {
  const char* x;
  const char* y;
  const char* x_column; /* optional: first column after date */
  const char* y_column;
  const char* out;
  int max_lag;
  double alpha;
  const char* dof; /* "unrestricted" | "lag-plus-one" */
  int stationarity_gate;
  int adf_max_lags; /* -1: default rule */
  unsigned threads; /* 0: all cores, capped by CAUSAL_CALIB_THREADS */
} cc_causality_options;

CC_API void cc_causality_options_init(cc_causality_options* opts);
CC_API cc_status cc_run_causality(cc_context* ctx, const cc_causality_options* opts);

typedef enum cc_sentiment_use {
  CC_SENTIMENT_WITH = 0,
  CC_SENTIMENT_WITHOUT = 1,
  CC_SENTIMENT_BOTH = 2
} cc_sentiment_use;

typedef struct cc_vol_config {
  int timesteps;
  int layers;
  int hidden;
  double dropout;
  int epochs;
  int batch_size;
  double learning_rate;
  uint64_t seed;
  double train_fraction;
} cc_vol_config;

typedef struct cc_train_vol_options {
  const char* features;
  const char* sentiment; /* optional date,score,count file */
  const char* target;    /* feature column, default "volatility" */
  cc_sentiment_use use_sentiment;
  cc_vol_config config;
  const char* out_dir;
} cc_train_vol_options;

CC_API void cc_train_vol_options_init(cc_train_vol_options* opts);
/* Overwrites opts->config with the keys found in a JSON file. */
CC_API cc_status cc_load_vol_config(cc_context* ctx, const char* path, cc_vol_config* config);
CC_API cc_status cc_run_train_vol(cc_context* ctx, const cc_train_vol_options* opts);

typedef struct cc_predict_vol_options {
  const char* model;
  const char* features;
  const char* sentiment;
  const char* target;
  const char* out;
} cc_predict_vol_options;

CC_API void cc_predict_vol_options_init(cc_predict_vol_options* opts);
CC_API cc_status cc_run_predict_vol(cc_context* ctx, const cc_predict_vol_options* opts);

typedef struct cc_classifier_config {
  int embed_dim;
  int hidden[3];
  int epochs;
  int batch_size;
  double learning_rate;
  int max_seq_len;
  double test_fraction;
  const char* loss; /* "ce" | "fl" | "fcl" */
  double gamma;
  double lambda;
  uint64_t seed;
  const char* embeddings; /* optional */
} cc_classifier_config;

typedef struct cc_train_classifier_options {
  const char* corpus;
  cc_classifier_config config;
  int bins;
  const char* out_dir;
} cc_train_classifier_options;

CC_API void cc_train_classifier_options_init(cc_train_classifier_options* opts);
/* String members written here point into storage owned by ctx. */
CC_API cc_status cc_load_classifier_config(cc_context* ctx, const char* path,
                                           cc_classifier_config* config);
CC_API cc_status cc_run_train_classifier(cc_context* ctx, const cc_train_classifier_options* opts);

typedef struct cc_evaluate_classifier_options {
  const char* model;
  const char* corpus;
  int bins;
  const char* out_dir;
} cc_evaluate_classifier_options;

CC_API void cc_evaluate_classifier_options_init(cc_evaluate_classifier_options* opts);
CC_API cc_status cc_run_evaluate_classifier(cc_context* ctx,
                                            const cc_evaluate_classifier_options* opts);

typedef struct cc_report_options {
  const char* preds;
  int bins;
  const char* out;
} cc_report_options;

CC_API void cc_report_options_init(cc_report_options* opts);
CC_API cc_status cc_run_report(cc_context* ctx, const cc_report_options* opts);

/* Generators. `kind` is one of "var", "walk", "noise", "corpus", "vol",
 * "prices"; `params_json` is an object of generator parameters (NULL or
 * "{}" for defaults), e.g. {"length": 500, "beta_x": 0.8}. */
CC_API cc_status cc_run_synth(cc_context* ctx, const char* kind, const char* params_json,
                              uint64_t seed, const char* out);

/* ---------------------------------------------------------------------
 * In-memory statistics. */

typedef struct cc_adf_result {
  double statistic;
  int lags_used;
  size_t n_obs;
  double critical_1pct;
  double critical_5pct;
  double critical_10pct;
  int reject_unit_root;
} cc_adf_result;

CC_API cc_status cc_adf(cc_context* ctx, const double* series, size_t n, int max_extra_lags,
                        cc_adf_result* out);

typedef struct cc_granger_report cc_granger_report;

/* x -> y and y -> x at lags 1..max_lag. */
CC_API cc_status cc_granger_sweep(cc_context* ctx, const double* y, const double* x, size_t n,
                                  int max_lag, double alpha, cc_granger_report** out);
CC_API void cc_granger_report_free(cc_granger_report* report);
/* "x-causes-y" | "y-causes-x" | "mutual" | "independent". */
CC_API const char* cc_granger_report_case(const cc_granger_report* report);
CC_API int cc_granger_report_max_lag(const cc_granger_report* report);
/* direction 0 is x -> y, 1 is y -> x; lag is 1-based. */
CC_API cc_status cc_granger_report_lag(const cc_granger_report* report, int direction, int lag,
                                       double* f_stat, double* p_value);
CC_API const char* cc_granger_report_json(cc_granger_report* report);

/* Losses of row-major logits (n x classes); grad_logits may be NULL. */
CC_API cc_status cc_loss(cc_context* ctx, const char* kind, double gamma, double lambda,
                         const double* logits, const int* labels, size_t n, size_t classes,
                         double* value, double* grad_logits);

typedef struct cc_calibration {
  double ece;
  double mce;
  double brier;
  double accuracy;
} cc_calibration;

CC_API cc_status cc_calibration_metrics(cc_context* ctx, const double* probs, const int* labels,
                                        size_t n, size_t classes, int bins, cc_calibration* out);

/* ---------------------------------------------------------------------
 * Trained classifier checkpoints. */

typedef struct cc_classifier cc_classifier;

CC_API cc_status cc_classifier_load(cc_context* ctx, const char* checkpoint, cc_classifier** out);
CC_API void cc_classifier_free(cc_classifier* model);
CC_API size_t cc_classifier_classes(const cc_classifier* model);
CC_API const char* cc_classifier_label(const cc_classifier* model, size_t index);
/* probs receives n x classes values, row-major. */
CC_API cc_status cc_classifier_predict(cc_context* ctx, const cc_classifier* model,
                                       const char* const* texts, size_t n, double* probs);

#ifdef __cplusplus
}
#endif

#endif /* CAUSAL_CALIB_C_API_H_ */
