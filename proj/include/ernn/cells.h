// ernn/cells.h

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

#ifndef ERNN_CELLS_H_
#define ERNN_CELLS_H_

#include <cmath>
#include <string>
#include <vector>

#include "ernn/autodiff.h"
#include "ernn/kernels.h"
#include "ernn/params.h"
#include "ernn/rng.h"
#include "ernn/tensor.h"

namespace ernn {

template <Scalar T>
void init_glorot(Parameter<T>& p, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : p.value.data) v = static_cast<T>(rng.uniform(-bound, bound));
}

// ---------------------------------------------------------------------------
// Equilibriated cell. Each frame refines an increment xi by K damped
// fixed-point iterations of a shared inner network F applied to the combined
// state xi + h_prev:
//
//   xi_{k+1} = xi_k + step_k * (F(feat, xi_k + h_prev) - (xi_k + h_prev))
//
// starting from xi_0 = 0; the new hidden state is xi_K. The step sizes are
// trainable scalars, one per iteration. F is a two-hidden-layer ReLU net:
// feature and state projections are summed, passed through ReLU, squeezed to
// the hidden width and expanded back to the state width.
// ---------------------------------------------------------------------------

struct ErnnConfig {
  std::size_t feature_dim = 257;
  std::size_t state_dim = 256;
  std::size_t hidden_dim = 256;
  std::size_t iters = 3;  // K >= 1

  void validate() const {
    if (feature_dim == 0 || state_dim == 0 || hidden_dim == 0 || iters == 0)
      throw std::invalid_argument("ernn config: all extents must be positive");
  }
};

inline std::size_t ernn_cell_parameter_count(const ErnnConfig& c) {
  return (c.feature_dim * c.state_dim + c.state_dim) +      // feature projection
         (c.state_dim * c.state_dim + c.state_dim) +        // state projection
         (c.state_dim * c.hidden_dim + c.hidden_dim) +      // squeeze
         (c.hidden_dim * c.state_dim + c.state_dim) +       // expand
         c.iters;                                           // step sizes
}

template <Scalar T>
struct ErnnCell {
  ErnnConfig cfg;
  Parameter<T>* in_w = nullptr;
  Parameter<T>* in_b = nullptr;
  Parameter<T>* rec_w = nullptr;
  Parameter<T>* rec_b = nullptr;
  Parameter<T>* mid_w = nullptr;
  Parameter<T>* mid_b = nullptr;
  Parameter<T>* out_w = nullptr;
  Parameter<T>* out_b = nullptr;
  std::vector<Parameter<T>*> steps;

  static ErnnCell create(ParameterStore<T>& store, const ErnnConfig& cfg,
                         const std::string& prefix) {
    cfg.validate();
    ErnnCell c;
    c.cfg = cfg;
    c.in_w = &store.add(prefix + "in.w", {cfg.state_dim, cfg.feature_dim});
    c.in_b = &store.add(prefix + "in.b", {cfg.state_dim});
    c.rec_w = &store.add(prefix + "rec.w", {cfg.state_dim, cfg.state_dim});
    c.rec_b = &store.add(prefix + "rec.b", {cfg.state_dim});
    c.mid_w = &store.add(prefix + "mid.w", {cfg.hidden_dim, cfg.state_dim});
    c.mid_b = &store.add(prefix + "mid.b", {cfg.hidden_dim});
    c.out_w = &store.add(prefix + "out.w", {cfg.state_dim, cfg.hidden_dim});
    c.out_b = &store.add(prefix + "out.b", {cfg.state_dim});
    for (std::size_t k = 0; k < cfg.iters; ++k)
      c.steps.push_back(&store.add(prefix + "step." + std::to_string(k), {1}));
    return c;
  }

  static ErnnCell bind(ParameterStore<T>& store, const ErnnConfig& cfg,
                       const std::string& prefix) {
    ErnnCell c;
    c.cfg = cfg;
    c.in_w = &store.at(prefix + "in.w");
    c.in_b = &store.at(prefix + "in.b");
    c.rec_w = &store.at(prefix + "rec.w");
    c.rec_b = &store.at(prefix + "rec.b");
    c.mid_w = &store.at(prefix + "mid.w");
    c.mid_b = &store.at(prefix + "mid.b");
    c.out_w = &store.at(prefix + "out.w");
    c.out_b = &store.at(prefix + "out.b");
    for (std::size_t k = 0; k < cfg.iters; ++k)
      c.steps.push_back(&store.at(prefix + "step." + std::to_string(k)));
    return c;
  }

  // Step sizes start small and positive; the projections use Glorot bounds.
  void init(Rng& rng, T step_init = T(0.1)) {
    init_glorot(*in_w, cfg.feature_dim, cfg.state_dim, rng);
    init_glorot(*rec_w, cfg.state_dim, cfg.state_dim, rng);
    init_glorot(*mid_w, cfg.state_dim, cfg.hidden_dim, rng);
    init_glorot(*out_w, cfg.hidden_dim, cfg.state_dim, rng);
    for (auto* s : steps) s->value[0] = step_init;
  }

  struct Scratch {
    std::vector<T> feat_proj, state_proj, combined, mid, f, state_sum;
    explicit Scratch(const ErnnConfig& c)
        : feat_proj(c.state_dim),
          state_proj(c.state_dim),
          combined(c.state_dim),
          mid(c.hidden_dim),
          f(c.state_dim),
          state_sum(c.state_dim) {}
  };

  // F(feat, z): shared inner network, plain arithmetic path.
  void inner(const T* feat, const T* z, Scratch& s) const {
    const std::size_t ns = cfg.state_dim, nh = cfg.hidden_dim, nf = cfg.feature_dim;
    kernels::gemv(in_w->value.data.data(), feat, in_b->value.data.data(), s.feat_proj.data(),
                  ns, nf);
    kernels::gemv(rec_w->value.data.data(), z, rec_b->value.data.data(), s.state_proj.data(),
                  ns, ns);
    for (std::size_t i = 0; i < ns; ++i) {
      const T u = s.feat_proj[i] + s.state_proj[i];
      s.combined[i] = u > T(0) ? u : T(0);
    }
    kernels::gemv(mid_w->value.data.data(), s.combined.data(), mid_b->value.data.data(),
                  s.mid.data(), nh, ns);
    for (std::size_t i = 0; i < nh; ++i) s.mid[i] = s.mid[i] > T(0) ? s.mid[i] : T(0);
    kernels::gemv(out_w->value.data.data(), s.mid.data(), out_b->value.data.data(), s.f.data(),
                  ns, nh);
  }

  // One frame, plain path: h_out may alias nothing. Matches step_node
  // bit-for-bit (same kernels, same evaluation order).
  void step(const T* feat, const T* h_prev, T* h_out, Scratch& s) const {
    const std::size_t ns = cfg.state_dim;
    std::vector<T> xi(ns, T(0));
    for (std::size_t k = 0; k < cfg.iters; ++k) {
      const T* z;
      if (k == 0) {
        z = h_prev;
      } else {
        for (std::size_t i = 0; i < ns; ++i) s.state_sum[i] = xi[i] + h_prev[i];
        z = s.state_sum.data();
      }
      inner(feat, z, s);
      const T eta = steps[k]->value[0];
      if (k == 0) {
        for (std::size_t i = 0; i < ns; ++i) xi[i] = eta * (s.f[i] - z[i]);
      } else {
        for (std::size_t i = 0; i < ns; ++i) xi[i] = xi[i] + eta * (s.f[i] - z[i]);
      }
    }
    for (std::size_t i = 0; i < ns; ++i) h_out[i] = xi[i];
  }

  struct Nodes {
    ad::ValueId in_w, in_b, rec_w, rec_b, mid_w, mid_b, out_w, out_b;
    std::vector<ad::ValueId> steps;
  };

  Nodes bind_tape(ad::Tape<T>& tape) const {
    Nodes n;
    n.in_w = tape.param(*in_w);
    n.in_b = tape.param(*in_b);
    n.rec_w = tape.param(*rec_w);
    n.rec_b = tape.param(*rec_b);
    n.mid_w = tape.param(*mid_w);
    n.mid_b = tape.param(*mid_b);
    n.out_w = tape.param(*out_w);
    n.out_b = tape.param(*out_b);
    for (auto* s : steps) n.steps.push_back(tape.param(*s));
    return n;
  }

  ad::ValueId inner_node(ad::Tape<T>& tape, const Nodes& n, ad::ValueId feat,
                         ad::ValueId z) const {
    auto u = tape.add(tape.affine(feat, n.in_w, n.in_b), tape.affine(z, n.rec_w, n.rec_b));
    auto mid = tape.relu(tape.affine(tape.relu(u), n.mid_w, n.mid_b));
    return tape.affine(mid, n.out_w, n.out_b);
  }

  ad::ValueId step_node(ad::Tape<T>& tape, const Nodes& n, ad::ValueId feat,
                        ad::ValueId h_prev) const {
    ad::ValueId xi;
    for (std::size_t k = 0; k < cfg.iters; ++k) {
      const ad::ValueId z = k == 0 ? h_prev : tape.add(xi, h_prev);
      const ad::ValueId f = inner_node(tape, n, feat, z);
      const ad::ValueId delta = tape.scale(n.steps[k], tape.sub(f, z));
      xi = k == 0 ? delta : tape.add(xi, delta);
    }
    return xi;
  }
};

// ---------------------------------------------------------------------------
// Standard LSTM cell: i,f,o = sigmoid, g = tanh, c' = f.c + i.g,
// h' = o.tanh(c'). One instance per layer.
// ---------------------------------------------------------------------------

template <Scalar T>
struct LstmCell {
  std::size_t input_dim = 0;
  std::size_t state_dim = 0;
  struct Gate {
    Parameter<T>* wx = nullptr;
    Parameter<T>* wh = nullptr;
    Parameter<T>* b = nullptr;
  };
  Gate gates[4];  // order: input, forget, cell, output

  static constexpr const char* kGateNames[4] = {"i", "f", "g", "o"};

  static LstmCell create(ParameterStore<T>& store, std::size_t input_dim,
                         std::size_t state_dim, const std::string& prefix) {
    LstmCell c;
    c.input_dim = input_dim;
    c.state_dim = state_dim;
    for (int g = 0; g < 4; ++g) {
      const std::string base = prefix + kGateNames[g] + ".";
      c.gates[g].wx = &store.add(base + "wx", {state_dim, input_dim});
      c.gates[g].wh = &store.add(base + "wh", {state_dim, state_dim});
      c.gates[g].b = &store.add(base + "b", {state_dim});
    }
    return c;
  }

  static LstmCell bind(ParameterStore<T>& store, std::size_t input_dim, std::size_t state_dim,
                       const std::string& prefix) {
    LstmCell c;
    c.input_dim = input_dim;
    c.state_dim = state_dim;
    for (int g = 0; g < 4; ++g) {
      const std::string base = prefix + kGateNames[g] + ".";
      c.gates[g].wx = &store.at(base + "wx");
      c.gates[g].wh = &store.at(base + "wh");
      c.gates[g].b = &store.at(base + "b");
    }
    return c;
  }

  void init(Rng& rng) {
    for (int g = 0; g < 4; ++g) {
      init_glorot(*gates[g].wx, input_dim, state_dim, rng);
      init_glorot(*gates[g].wh, state_dim, state_dim, rng);
    }
  }

  static std::size_t parameter_count(std::size_t input_dim, std::size_t state_dim) {
    return 4 * ((input_dim + state_dim) * state_dim + state_dim);
  }

  struct Scratch {
    std::vector<T> pre[4], xpart, gate[4];
    explicit Scratch(std::size_t ns) : xpart(ns) {
      for (auto& p : pre) p.resize(ns);
      for (auto& g : gate) g.resize(ns);
    }
  };

  void step(const T* x, T* h, T* c, Scratch& s) const {
    const std::size_t ns = state_dim;
    for (int g = 0; g < 4; ++g) {
      kernels::gemv(gates[g].wx->value.data.data(), x, gates[g].b->value.data.data(),
                    s.xpart.data(), ns, input_dim);
      kernels::gemv(gates[g].wh->value.data.data(), h, static_cast<const T*>(nullptr), s.pre[g].data(), ns, ns);
      for (std::size_t i = 0; i < ns; ++i) s.pre[g][i] = s.xpart[i] + s.pre[g][i];
    }
    for (std::size_t i = 0; i < ns; ++i) {
      const T gi = T(1) / (T(1) + std::exp(-s.pre[0][i]));
      const T gf = T(1) / (T(1) + std::exp(-s.pre[1][i]));
      const T gg = std::tanh(s.pre[2][i]);
      const T go = T(1) / (T(1) + std::exp(-s.pre[3][i]));
      const T cn = gf * c[i] + gi * gg;
      c[i] = cn;
      h[i] = go * std::tanh(cn);
    }
  }

  struct Nodes {
    ad::ValueId wx[4], wh[4], b[4];
  };

  Nodes bind_tape(ad::Tape<T>& tape) const {
    Nodes n;
    for (int g = 0; g < 4; ++g) {
      n.wx[g] = tape.param(*gates[g].wx);
      n.wh[g] = tape.param(*gates[g].wh);
      n.b[g] = tape.param(*gates[g].b);
    }
    return n;
  }

  // Returns (h', c').
  std::pair<ad::ValueId, ad::ValueId> step_node(ad::Tape<T>& tape, const Nodes& n,
                                                ad::ValueId x, ad::ValueId h,
                                                ad::ValueId c) const {
    ad::ValueId pre[4];
    for (int g = 0; g < 4; ++g)
      pre[g] = tape.add(tape.affine(x, n.wx[g], n.b[g]), tape.matvec(n.wh[g], h));
    const auto gi = tape.sigmoid(pre[0]);
    const auto gf = tape.sigmoid(pre[1]);
    const auto gg = tape.tanh_(pre[2]);
    const auto go = tape.sigmoid(pre[3]);
    const auto cn = tape.add(tape.mul(gf, c), tape.mul(gi, gg));
    return {tape.mul(go, tape.tanh_(cn)), cn};
  }
};

// ---------------------------------------------------------------------------
// Vanilla RNN, used only for the gradient-dynamics diagnostics:
// h' = tanh(W_in x + W_rec h + b).
// ---------------------------------------------------------------------------

template <Scalar T>
struct VanillaCell {
  std::size_t input_dim = 0;
  std::size_t state_dim = 0;
  Parameter<T>* in_w = nullptr;
  Parameter<T>* rec_w = nullptr;
  Parameter<T>* b = nullptr;

  static VanillaCell create(ParameterStore<T>& store, std::size_t input_dim,
                            std::size_t state_dim, const std::string& prefix) {
    VanillaCell c;
    c.input_dim = input_dim;
    c.state_dim = state_dim;
    c.in_w = &store.add(prefix + "in.w", {state_dim, input_dim});
    c.rec_w = &store.add(prefix + "rec.w", {state_dim, state_dim});
    c.b = &store.add(prefix + "b", {state_dim});
    return c;
  }

  void step(const T* x, const T* h_prev, T* h_out, std::vector<T>& scratch) const {
    const std::size_t ns = state_dim;
    scratch.resize(ns);
    kernels::gemv(in_w->value.data.data(), x, b->value.data.data(), h_out, ns, input_dim);
    kernels::gemv(rec_w->value.data.data(), h_prev, static_cast<const T*>(nullptr), scratch.data(), ns, ns);
    for (std::size_t i = 0; i < ns; ++i) h_out[i] = std::tanh(h_out[i] + scratch[i]);
  }

  struct Nodes {
    ad::ValueId in_w, rec_w, b;
  };

  Nodes bind_tape(ad::Tape<T>& tape) const {
    return {tape.param(*in_w), tape.param(*rec_w), tape.param(*b)};
  }

  ad::ValueId step_node(ad::Tape<T>& tape, const Nodes& n, ad::ValueId x,
                        ad::ValueId h) const {
    return tape.tanh_(tape.add(tape.affine(x, n.in_w, n.b), tape.matvec(n.rec_w, h)));
  }
};

}  // namespace ernn

#endif  // ERNN_CELLS_H_
