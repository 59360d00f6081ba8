// ernn/model.h

// Copyright 2026  ernn-se authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ERNN_MODEL_H_
#define ERNN_MODEL_H_

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "ernn/cells.h"
#include "ernn/params.h"
#include "ernn/rng.h"
#include "ernn/tensor.h"

namespace ernn {

enum class Arch { ernn, lstm2 };

inline std::string arch_name(Arch a) { return a == Arch::ernn ? "ernn" : "lstm2"; }

inline Arch arch_from_name(const std::string& s) {
  if (s == "ernn") return Arch::ernn;
  if (s == "lstm2") return Arch::lstm2;
  throw std::invalid_argument("unknown architecture: " + s);
}

struct ModelConfig {
  Arch arch = Arch::ernn;
  std::size_t state_dim = 256;
  std::size_t hidden_dim = 128;  // ernn only
  std::size_t iters = 1;         // ernn only
  std::size_t feature_dim = 257;
  std::uint64_t seed = 1234;

  void validate() const {
    if (feature_dim == 0 || state_dim == 0)
      throw std::invalid_argument("model config: extents must be positive");
    if (arch == Arch::ernn && (hidden_dim == 0 || iters == 0))
      throw std::invalid_argument("model config: ernn needs hidden_dim and iters >= 1");
  }
};

// Rounded form used in reports: counts below a million go to the nearest
// thousand ("329k"), the rest to two decimals ("1.12M").
inline std::string format_param_count(std::size_t count) {
  if (count >= 1000000) {
    const double m = static_cast<double>(count) / 1e6;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2fM", m);
    return buf;
  }
  const long k = std::lround(static_cast<double>(count) / 1000.0);
  return std::to_string(k) + "k";
}

// Recurrent mask estimator: one recurrent stage plus a sigmoid head mapping
// the state to a per-bin gain in (0,1). The ernn arch is a single cell; the
// lstm2 baseline stacks two unidirectional layers.
template <Scalar T>
class MaskModel {
 public:
  static std::unique_ptr<MaskModel> create(const ModelConfig& cfg) {
    auto m = build(cfg);
    Rng rng(cfg.seed);
    if (cfg.arch == Arch::ernn) {
      m->ernn_->init(rng);
    } else {
      m->lstm_a_->init(rng);
      m->lstm_b_->init(rng);
    }
    init_glorot(*m->head_w_, cfg.state_dim, cfg.feature_dim, rng);
    return m;
  }

  // Structure only; parameter values come from a checkpoint.
  static std::unique_ptr<MaskModel> create_uninitialized(const ModelConfig& cfg) {
    return build(cfg);
  }

  const ModelConfig& config() const { return cfg_; }
  ParameterStore<T>& params() { return store_; }
  const ParameterStore<T>& params() const { return store_; }
  std::size_t parameter_count() const { return store_.scalar_count(); }

  static std::size_t count_parameters(const ModelConfig& cfg) {
    cfg.validate();
    const std::size_t head = cfg.state_dim * cfg.feature_dim + cfg.feature_dim;
    if (cfg.arch == Arch::ernn) {
      ErnnConfig ec{cfg.feature_dim, cfg.state_dim, cfg.hidden_dim, cfg.iters};
      return ernn_cell_parameter_count(ec) + head;
    }
    return LstmCell<T>::parameter_count(cfg.feature_dim, cfg.state_dim) +
           LstmCell<T>::parameter_count(cfg.state_dim, cfg.state_dim) + head;
  }

  // --- plain inference path -------------------------------------------------

  // Holds the recurrent state and this stream's work buffers, so one model
  // can serve many streams concurrently.
  struct State {
    std::vector<T> h1, c1, h2, c2;  // ernn uses h1 only
    std::vector<T> h_next;
    std::unique_ptr<typename ErnnCell<T>::Scratch> ernn_scratch;
    std::unique_ptr<typename LstmCell<T>::Scratch> lstm_scratch;
  };

  State initial_state() const {
    State st;
    st.h1.assign(cfg_.state_dim, T(0));
    if (cfg_.arch == Arch::ernn) {
      st.h_next.assign(cfg_.state_dim, T(0));
      ErnnConfig ec{cfg_.feature_dim, cfg_.state_dim, cfg_.hidden_dim, cfg_.iters};
      st.ernn_scratch = std::make_unique<typename ErnnCell<T>::Scratch>(ec);
    } else {
      st.c1.assign(cfg_.state_dim, T(0));
      st.h2.assign(cfg_.state_dim, T(0));
      st.c2.assign(cfg_.state_dim, T(0));
      st.lstm_scratch = std::make_unique<typename LstmCell<T>::Scratch>(cfg_.state_dim);
    }
    return st;
  }

  // One frame: consumes a feature vector, advances the state, emits a mask.
  void step(const T* feat, State& st, T* mask_out) const {
    if (cfg_.arch == Arch::ernn) {
      ernn_->step(feat, st.h1.data(), st.h_next.data(), *st.ernn_scratch);
      st.h1.swap(st.h_next);
    } else {
      lstm_a_->step(feat, st.h1.data(), st.c1.data(), *st.lstm_scratch);
      lstm_b_->step(st.h1.data(), st.h2.data(), st.c2.data(), *st.lstm_scratch);
    }
    const T* top = cfg_.arch == Arch::ernn ? st.h1.data() : st.h2.data();
    kernels::gemv(head_w_->value.data.data(), top, head_b_->value.data.data(), mask_out,
                  cfg_.feature_dim, cfg_.state_dim);
    for (std::size_t i = 0; i < cfg_.feature_dim; ++i)
      mask_out[i] = T(1) / (T(1) + std::exp(-mask_out[i]));
  }

  // Whole sequence from zero state; rows are frames. Strictly causal: frame
  // tau only ever sees features 0..tau.
  Tensor<T> forward_masks(const Tensor<T>& features) const {
    if (features.rank() != 2 || features.cols() != cfg_.feature_dim)
      throw std::invalid_argument("forward_masks: features " + shape_string(features.shape) +
                                  ", expected (T x " + std::to_string(cfg_.feature_dim) + ")");
    Tensor<T> masks({features.rows(), cfg_.feature_dim});
    State st = initial_state();
    for (std::size_t tau = 0; tau < features.rows(); ++tau)
      step(&features.at2(tau, 0), st, &masks.at2(tau, 0));
    return masks;
  }

  // --- tape path --------------------------------------------------------------

  struct TapeCtx {
    typename ErnnCell<T>::Nodes ernn;
    typename LstmCell<T>::Nodes lstm_a, lstm_b;
    ad::ValueId head_w, head_b;
    std::vector<ad::ValueId> state;  // ernn: {h}; lstm2: {h1,c1,h2,c2}
  };

  TapeCtx bind(ad::Tape<T>& tape) const {
    TapeCtx ctx;
    if (cfg_.arch == Arch::ernn) {
      ctx.ernn = ernn_->bind_tape(tape);
      ctx.state = {tape.constant(Tensor<T>::zeros({cfg_.state_dim}))};
    } else {
      ctx.lstm_a = lstm_a_->bind_tape(tape);
      ctx.lstm_b = lstm_b_->bind_tape(tape);
      for (int i = 0; i < 4; ++i)
        ctx.state.push_back(tape.constant(Tensor<T>::zeros({cfg_.state_dim})));
    }
    ctx.head_w = tape.param(*head_w_);
    ctx.head_b = tape.param(*head_b_);
    return ctx;
  }

  // One recorded frame; returns the mask node and advances ctx.state.
  ad::ValueId step_node(ad::Tape<T>& tape, TapeCtx& ctx, ad::ValueId feat) const {
    ad::ValueId top;
    if (cfg_.arch == Arch::ernn) {
      ctx.state[0] = ernn_->step_node(tape, ctx.ernn, feat, ctx.state[0]);
      top = ctx.state[0];
    } else {
      auto [h1, c1] = lstm_a_->step_node(tape, ctx.lstm_a, feat, ctx.state[0], ctx.state[1]);
      auto [h2, c2] = lstm_b_->step_node(tape, ctx.lstm_b, h1, ctx.state[2], ctx.state[3]);
      ctx.state = {h1, c1, h2, c2};
      top = h2;
    }
    return tape.sigmoid(tape.affine(top, ctx.head_w, ctx.head_b));
  }

 private:
  static std::unique_ptr<MaskModel> build(const ModelConfig& cfg) {
    cfg.validate();
    auto m = std::unique_ptr<MaskModel>(new MaskModel());
    m->cfg_ = cfg;
    if (cfg.arch == Arch::ernn) {
      ErnnConfig ec{cfg.feature_dim, cfg.state_dim, cfg.hidden_dim, cfg.iters};
      m->ernn_ = std::make_unique<ErnnCell<T>>(ErnnCell<T>::create(m->store_, ec, "cell."));
    } else {
      m->lstm_a_ = std::make_unique<LstmCell<T>>(
          LstmCell<T>::create(m->store_, cfg.feature_dim, cfg.state_dim, "lstm1."));
      m->lstm_b_ = std::make_unique<LstmCell<T>>(
          LstmCell<T>::create(m->store_, cfg.state_dim, cfg.state_dim, "lstm2."));
    }
    m->head_w_ = &m->store_.add("head.w", {cfg.feature_dim, cfg.state_dim});
    m->head_b_ = &m->store_.add("head.b", {cfg.feature_dim});
    return m;
  }

  MaskModel() = default;

  ModelConfig cfg_;
  ParameterStore<T> store_;
  std::unique_ptr<ErnnCell<T>> ernn_;
  std::unique_ptr<LstmCell<T>> lstm_a_, lstm_b_;
  Parameter<T>* head_w_ = nullptr;
  Parameter<T>* head_b_ = nullptr;
};

}  // namespace ernn

#endif  // ERNN_MODEL_H_
