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

// Command-line front end. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causal_calib/c_api.h"

namespace {

struct Context {
  cc_context* ctx = cc_context_new();
  ~Context() { cc_context_free(ctx); }
};

bool g_quiet = false;

void print_progress(const char* message, void*) {
  if (!g_quiet) std::cout << message << std::endl;
}

int finish(cc_context* ctx, cc_status status) {
  for (size_t i = 0; i < cc_warning_count(ctx); ++i) {
    std::cerr << "warning: " << cc_warning(ctx, i) << '\n';
  }
  if (status == CC_OK) return 0;
  std::cerr << "error: " << cc_last_error(ctx) << '\n';
  return status == CC_ERROR_VALIDATION || status == CC_ERROR_IO ? 2 : 1;
}

const char* opt_str(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

/// Copies `value` into `field` only when the flag was given, so a --config
/// file can supply everything else.
template <class T, class U>
void override(const CLI::Option* opt, T& field, const U& value) {
  if (opt->count() > 0) field = static_cast<T>(value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causality-driven feature selection and calibrated classification toolkit", "causal-calib"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cc_version()));
  app.add_flag("-q,--quiet", g_quiet, "Suppress progress output");

  Context context;
  cc_context* ctx = context.ctx;
  if (ctx == nullptr) {
    std::cerr << "error: out of memory\n";
    return 1;
  }
  cc_context_set_progress(ctx, print_progress, nullptr);
  std::function<cc_status()> action;

  // features ---------------------------------------------------------------
  cc_features_options features;
  cc_features_options_init(&features);
  std::string f_ohlcv, f_out;
  auto* features_cmd = app.add_subcommand("features", "Momentum, returns and volatility from OHLCV prices");
  features_cmd->add_option("--ohlcv", f_ohlcv, "Price CSV (date,open,high,low,close,volume)")->required();
  features_cmd->add_option("--out", f_out, "Output feature CSV")->required();
  features_cmd->add_option("--momentum-n", features.momentum_n, "Momentum lookback in trading days")
      ->capture_default_str();
  features_cmd->add_option("--return-horizon", features.return_horizon, "Return horizon in trading days")
      ->capture_default_str();
  features_cmd->add_option("--vol-window", features.vol_window, "Rolling volatility window (>= 2)")
      ->capture_default_str();
  features_cmd->callback([&] {
    action = [&] {
      features.ohlcv = f_ohlcv.c_str();
      features.out = f_out.c_str();
      return cc_run_features(ctx, &features);
    };
  });

  // sentiment --------------------------------------------------------------
  std::string s_news, s_out, s_calendar, s_align = "next", s_dump;
  auto* sentiment_cmd = app.add_subcommand("sentiment", "Per-day sentiment aggregate from probability triples");
  sentiment_cmd->add_option("--news", s_news, "Sentiment records (CSV or JSONL)")->required();
  sentiment_cmd->add_option("--calendar", s_calendar, "Trading calendar CSV (first column date)");
  sentiment_cmd->add_option("--align", s_align, "Off-calendar policy: next, prev or drop")->capture_default_str();
  sentiment_cmd->add_option("--out", s_out, "Output CSV (date,score,count)")->required();
  sentiment_cmd->add_option("--dump-records", s_dump, "Also write per-record scores to this CSV");
  sentiment_cmd->callback([&] {
    action = [&] {
      cc_sentiment_options o;
      cc_sentiment_options_init(&o);
      o.news = s_news.c_str();
      o.out = s_out.c_str();
      o.calendar = opt_str(s_calendar);
      o.align = s_align.c_str();
      o.dump_records = opt_str(s_dump);
      return cc_run_sentiment(ctx, &o);
    };
  });

  // causality --------------------------------------------------------------
  cc_causality_options causality;
  cc_causality_options_init(&causality);
  std::string c_x, c_y, c_xcol, c_ycol, c_out, c_dof = "unrestricted";
  bool c_no_gate = false;
  auto* causality_cmd = app.add_subcommand("causality", "ADF gate and Granger causality sweep");
  causality_cmd->add_option("--x", c_x, "CSV holding the candidate cause")->required();
  causality_cmd->add_option("--y", c_y, "CSV holding the target series")->required();
  causality_cmd->add_option("--x-column", c_xcol, "Column of --x (default: first after date)");
  causality_cmd->add_option("--y-column", c_ycol, "Column of --y (default: first after date)");
  causality_cmd->add_option("--max-lag", causality.max_lag, "Largest lag order tested")->capture_default_str();
  causality_cmd->add_option("--alpha", causality.alpha, "Significance level")->capture_default_str();
  causality_cmd->add_option("--dof", c_dof, "Denominator dof: unrestricted or lag-plus-one")
      ->capture_default_str();
  causality_cmd->add_flag("--no-stationarity-gate", c_no_gate, "Skip the ADF test and differencing");
  causality_cmd->add_option("--adf-max-lags", causality.adf_max_lags, "ADF lag search bound (-1: automatic)")
      ->capture_default_str();
  causality_cmd->add_option("--threads", causality.threads, "Worker threads (0: all cores)")
      ->capture_default_str();
  causality_cmd->add_option("--out", c_out, "Output granger.json")->required();
  causality_cmd->callback([&] {
    action = [&] {
      causality.x = c_x.c_str();
      causality.y = c_y.c_str();
      causality.x_column = opt_str(c_xcol);
      causality.y_column = opt_str(c_ycol);
      causality.dof = c_dof.c_str();
      causality.stationarity_gate = c_no_gate ? 0 : 1;
      causality.out = c_out.c_str();
      return cc_run_causality(ctx, &causality);
    };
  });

  // train-vol --------------------------------------------------------------
  cc_train_vol_options vol;
  cc_train_vol_options_init(&vol);
  cc_vol_config vol_flags = vol.config;
  std::string v_features, v_sentiment, v_target = "volatility", v_use = "true", v_config, v_out;
  auto* vol_cmd = app.add_subcommand("train-vol", "Train the LSTM volatility predictor");
  vol_cmd->add_option("--features", v_features, "Feature CSV with a date column")->required();
  vol_cmd->add_option("--sentiment", v_sentiment, "Daily sentiment CSV (date,score,count) joined on date");
  vol_cmd->add_option("--target", v_target, "Target column: volatility or log_volatility")
      ->check(CLI::IsMember({"volatility", "log_volatility"}))
      ->capture_default_str();
  vol_cmd->add_option("--use-sentiment", v_use, "true, false or both (two runs plus comparison.json)")
      ->check(CLI::IsMember({"true", "false", "both"}))
      ->capture_default_str();
  vol_cmd->add_option("--config", v_config, "JSON file of model settings; flags given here win");
  auto* v_timesteps = vol_cmd->add_option("--timesteps", vol_flags.timesteps, "Input window length")
                          ->capture_default_str();
  auto* v_layers = vol_cmd->add_option("--layers", vol_flags.layers, "Stacked LSTM layers")->capture_default_str();
  auto* v_hidden = vol_cmd->add_option("--hidden", vol_flags.hidden, "Units per LSTM layer")->capture_default_str();
  auto* v_dropout = vol_cmd->add_option("--dropout", vol_flags.dropout, "Dropout rate between LSTM layers")
                        ->capture_default_str();
  auto* v_epochs = vol_cmd->add_option("--epochs", vol_flags.epochs, "Training epochs")->capture_default_str();
  auto* v_batch = vol_cmd->add_option("--batch-size", vol_flags.batch_size, "Minibatch size")->capture_default_str();
  auto* v_lr = vol_cmd->add_option("--lr", vol_flags.learning_rate, "Adam learning rate")->capture_default_str();
  auto* v_frac = vol_cmd->add_option("--train-fraction", vol_flags.train_fraction,
                                     "Chronological share of pairs used for training")
                     ->capture_default_str();
  auto* v_seed = vol_cmd->add_option("--seed", vol_flags.seed, "Random seed")->capture_default_str();
  vol_cmd->add_option("--out", v_out, "Run directory")->required();
  vol_cmd->callback([&] {
    action = [&] {
      if (!v_config.empty()) {
        const cc_status s = cc_load_vol_config(ctx, v_config.c_str(), &vol.config);
        if (s != CC_OK) return s;
      }
      override(v_timesteps, vol.config.timesteps, vol_flags.timesteps);
      override(v_layers, vol.config.layers, vol_flags.layers);
      override(v_hidden, vol.config.hidden, vol_flags.hidden);
      override(v_dropout, vol.config.dropout, vol_flags.dropout);
      override(v_epochs, vol.config.epochs, vol_flags.epochs);
      override(v_batch, vol.config.batch_size, vol_flags.batch_size);
      override(v_lr, vol.config.learning_rate, vol_flags.learning_rate);
      override(v_frac, vol.config.train_fraction, vol_flags.train_fraction);
      override(v_seed, vol.config.seed, vol_flags.seed);
      vol.features = v_features.c_str();
      vol.sentiment = opt_str(v_sentiment);
      vol.target = v_target.c_str();
      vol.use_sentiment = v_use == "true"    ? CC_SENTIMENT_WITH
                          : v_use == "false" ? CC_SENTIMENT_WITHOUT
                                             : CC_SENTIMENT_BOTH;
      vol.out_dir = v_out.c_str();
      return cc_run_train_vol(ctx, &vol);
    };
  });

  // predict-vol ------------------------------------------------------------
  std::string p_model, p_features, p_sentiment, p_target = "volatility", p_out;
  auto* predict_cmd = app.add_subcommand("predict-vol", "One-step-ahead volatility from a checkpoint");
  predict_cmd->add_option("--model", p_model, "checkpoint.json from train-vol")->required();
  predict_cmd->add_option("--features", p_features, "Feature CSV with a date column")->required();
  predict_cmd->add_option("--sentiment", p_sentiment, "Daily sentiment CSV joined on date");
  predict_cmd->add_option("--target", p_target, "Target column: volatility or log_volatility")
      ->check(CLI::IsMember({"volatility", "log_volatility"}))
      ->capture_default_str();
  predict_cmd->add_option("--out", p_out, "Output CSV (date,actual,predicted)")->required();
  predict_cmd->callback([&] {
    action = [&] {
      cc_predict_vol_options o;
      cc_predict_vol_options_init(&o);
      o.model = p_model.c_str();
      o.features = p_features.c_str();
      o.sentiment = opt_str(p_sentiment);
      o.target = p_target.c_str();
      o.out = p_out.c_str();
      return cc_run_predict_vol(ctx, &o);
    };
  });

  // train-classifier -------------------------------------------------------
  cc_train_classifier_options cls;
  cc_train_classifier_options_init(&cls);
  cc_classifier_config cls_flags = cls.config;
  std::string k_corpus, k_loss = "fcl", k_config, k_embeddings, k_out;
  int k_hidden = cls.config.hidden[0];
  auto* cls_cmd = app.add_subcommand("train-classifier", "Train the DAN 3 text classifier");
  cls_cmd->add_option("--corpus", k_corpus, "JSONL corpus of {label, text}")->required();
  auto* k_loss_opt = cls_cmd->add_option("--loss", k_loss, "Loss: ce, fl or fcl")->capture_default_str();
  auto* k_gamma = cls_cmd->add_option("--gamma", cls_flags.gamma, "Focusing parameter (fl, fcl)")
                      ->capture_default_str();
  auto* k_lambda = cls_cmd->add_option("--lambda", cls_flags.lambda, "Calibration weight (fcl)")
                       ->capture_default_str();
  cls_cmd->add_option("--bins", cls.bins, "Reliability bins")->capture_default_str();
  cls_cmd->add_option("--config", k_config, "JSON file of model settings; flags given here win");
  auto* k_embed = cls_cmd->add_option("--embed-dim", cls_flags.embed_dim, "Embedding width")->capture_default_str();
  auto* k_hidden_opt = cls_cmd->add_option("--hidden", k_hidden, "Width of each of the 3 hidden layers")
                           ->capture_default_str();
  auto* k_epochs = cls_cmd->add_option("--epochs", cls_flags.epochs, "Training epochs")->capture_default_str();
  auto* k_batch = cls_cmd->add_option("--batch-size", cls_flags.batch_size, "Minibatch size")->capture_default_str();
  auto* k_lr = cls_cmd->add_option("--lr", cls_flags.learning_rate, "Adam learning rate")->capture_default_str();
  auto* k_len = cls_cmd->add_option("--max-seq-len", cls_flags.max_seq_len, "Tokens kept per document")
                    ->capture_default_str();
  auto* k_test = cls_cmd->add_option("--test-fraction", cls_flags.test_fraction, "Stratified test share")
                     ->capture_default_str();
  auto* k_emb_opt = cls_cmd->add_option("--embeddings", k_embeddings, "Pretrained vectors (token v1 ... vd)");
  auto* k_seed = cls_cmd->add_option("--seed", cls_flags.seed, "Random seed")->capture_default_str();
  cls_cmd->add_option("--out", k_out, "Run directory")->required();
  cls_cmd->callback([&] {
    action = [&] {
      if (!k_config.empty()) {
        const cc_status s = cc_load_classifier_config(ctx, k_config.c_str(), &cls.config);
        if (s != CC_OK) return s;
      }
      if (k_loss_opt->count() > 0) cls.config.loss = k_loss.c_str();
      override(k_gamma, cls.config.gamma, cls_flags.gamma);
      override(k_lambda, cls.config.lambda, cls_flags.lambda);
      override(k_embed, cls.config.embed_dim, cls_flags.embed_dim);
      if (k_hidden_opt->count() > 0) {
        for (int& h : cls.config.hidden) h = k_hidden;
      }
      override(k_epochs, cls.config.epochs, cls_flags.epochs);
      override(k_batch, cls.config.batch_size, cls_flags.batch_size);
      override(k_lr, cls.config.learning_rate, cls_flags.learning_rate);
      override(k_len, cls.config.max_seq_len, cls_flags.max_seq_len);
      override(k_test, cls.config.test_fraction, cls_flags.test_fraction);
      if (k_emb_opt->count() > 0) cls.config.embeddings = k_embeddings.c_str();
      override(k_seed, cls.config.seed, cls_flags.seed);
      cls.corpus = k_corpus.c_str();
      cls.out_dir = k_out.c_str();
      const std::string loss = cls.config.loss ? cls.config.loss : "";
      std::vector<std::string> notes;
      if (loss == "fl" && k_lambda->count() > 0) notes.emplace_back("lambda ignored for fl");
      if (loss == "ce" && k_gamma->count() > 0) notes.emplace_back("gamma ignored for ce");
      if (loss == "ce" && k_lambda->count() > 0) notes.emplace_back("lambda ignored for ce");
      for (const auto& n : notes) std::cerr << "warning: " << n << '\n';
      return cc_run_train_classifier(ctx, &cls);
    };
  });

  // evaluate-classifier ----------------------------------------------------
  std::string e_model, e_corpus, e_out;
  int e_bins = 15;
  auto* eval_cmd = app.add_subcommand("evaluate-classifier", "Score a DAN 3 checkpoint on a labeled corpus");
  eval_cmd->add_option("--model", e_model, "checkpoint.json from train-classifier")->required();
  eval_cmd->add_option("--corpus", e_corpus, "JSONL corpus of {label, text}")->required();
  eval_cmd->add_option("--bins", e_bins, "Reliability bins")->capture_default_str();
  eval_cmd->add_option("--out", e_out, "Output directory")->required();
  eval_cmd->callback([&] {
    action = [&] {
      cc_evaluate_classifier_options o;
      cc_evaluate_classifier_options_init(&o);
      o.model = e_model.c_str();
      o.corpus = e_corpus.c_str();
      o.bins = e_bins;
      o.out_dir = e_out.c_str();
      return cc_run_evaluate_classifier(ctx, &o);
    };
  });

  // report -----------------------------------------------------------------
  std::string r_preds, r_out;
  int r_bins = 15;
  auto* report_cmd = app.add_subcommand("report", "ECE, MCE, Brier and reliability bins from a prediction dump");
  report_cmd->add_option("--preds", r_preds, "predictions.csv (sample_id,true_label,pred_label,p_0,...)")
      ->required();
  report_cmd->add_option("--bins", r_bins, "Reliability bins")->capture_default_str();
  report_cmd->add_option("--out", r_out, "Output reliability.json (CSV written alongside)")->required();
  report_cmd->callback([&] {
    action = [&] {
      cc_report_options o;
      cc_report_options_init(&o);
      o.preds = r_preds.c_str();
      o.bins = r_bins;
      o.out = r_out.c_str();
      return cc_run_report(ctx, &o);
    };
  });

  // synth ------------------------------------------------------------------
  auto* synth_cmd = app.add_subcommand("synth", "Seeded synthetic fixtures");
  synth_cmd->require_subcommand(1);
  std::uint64_t g_seed = 0;
  std::string g_out;
  std::string g_params;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", g_seed, "Random seed")->capture_default_str();
    sub->add_option("--out", g_out, "Output file")->required();
  };
  auto param = [&](const std::string& key, const std::string& value, bool quoted = false) {
    if (!g_params.empty()) g_params += ',';
    g_params += '"' + key + "\":" + (quoted ? '"' + value + '"' : value);
  };
  struct Knob {
    const char* flag;
    const char* key;
    const char* help;
    std::string value;
    CLI::Option* opt = nullptr;
  };
  auto make_synth = [&](const char* name, const char* help, std::vector<Knob> knobs) {
    auto* sub = synth_cmd->add_subcommand(name, help);
    add_common(sub);
    auto shared = std::make_shared<std::vector<Knob>>(std::move(knobs));
    for (auto& k : *shared) k.opt = sub->add_option(k.flag, k.value, k.help);
    sub->callback([&, shared, name] {
      action = [&, shared, name] {
        g_params.clear();
        for (const auto& k : *shared) {
          if (k.opt->count() > 0) param(k.key, k.value);
        }
        const std::string json = "{" + g_params + "}";
        return cc_run_synth(ctx, name, json.c_str(), g_seed, g_out.c_str());
      };
    });
    return sub;
  };
  make_synth("var", "Coupled VAR: y depends on lagged x",
             {{"--length", "length", "Series length (default 2000)", {}},
              {"--phi", "phi_y", "Own-lag coefficient of y (default 0.5)", {}},
              {"--beta", "beta_x", "Cross coefficient on lagged x (default 0.8)", {}},
              {"--lag", "lag_x", "Coupling lag (default 3)", {}},
              {"--noise-sd", "noise_sd", "Shock standard deviation (default 1)", {}}});
  make_synth("walk", "Gaussian random walk", {{"--length", "length", "Series length (default 500)", {}}});
  make_synth("noise", "Gaussian white noise", {{"--length", "length", "Series length (default 500)", {}}});
  make_synth("prices", "Random-walk OHLCV bars", {{"--length", "length", "Number of bars (default 500)", {}}});
  make_synth("corpus", "Keyword text corpus (JSONL)",
             {{"--classes", "classes", "Number of classes (default 4)", {}},
              {"--keywords", "keywords_per_class", "Exclusive keywords per class (default 20)", {}},
              {"--docs", "docs_per_class", "Documents per class (default 500)", {}},
              {"--doc-len", "doc_len", "Tokens per document (default 20)", {}},
              {"--filler", "filler_tokens", "Shared filler vocabulary size (default 50)", {}},
              {"--keyword-fraction", "keyword_fraction", "Chance a position holds a keyword (default 0.5)", {}},
              {"--label-noise", "label_noise_rate", "Chance a label is redrawn uniformly (default 0)", {}}});
  make_synth("vol", "Volatility driven by lagged sentiment",
             {{"--length", "length", "Series length (default 500)", {}},
              {"--persistence", "persistence", "Weight on yesterday's volatility (default 0.9)", {}},
              {"--weight", "sentiment_weight", "Weight on yesterday's sentiment (default 0.1)", {}},
              {"--level", "level", "Constant term (default 0.1)", {}}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (!action) return 2;
  return finish(ctx, action());
}
