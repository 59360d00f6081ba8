// ernn/diagnostics.h

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

#ifndef ERNN_DIAGNOSTICS_H_
#define ERNN_DIAGNOSTICS_H_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ernn/cells.h"
#include "ernn/streaming.h"

namespace ernn {

// Orthonormal matrix from modified Gram-Schmidt on a seeded Gaussian draw.
inline Tensor<double> random_orthogonal(std::size_t n, Rng& rng) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (auto& r : rows)
    for (auto& v : r) v = rng.gaussian();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double d = 0;
      for (std::size_t k = 0; k < n; ++k) d += rows[i][k] * rows[j][k];
      for (std::size_t k = 0; k < n; ++k) rows[i][k] -= d * rows[j][k];
    }
    double norm = 0;
    for (double v : rows[i]) norm += v * v;
    norm = std::sqrt(norm);
    for (auto& v : rows[i]) v /= norm;
  }
  Tensor<double> q({n, n});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q.at2(i, j) = rows[i][j];
  return q;
}

enum class CellKind { ernn, lstm, vanilla };

inline std::string cell_kind_name(CellKind k) {
  switch (k) {
    case CellKind::ernn: return "ernn";
    case CellKind::lstm: return "lstm";
    case CellKind::vanilla: return "vanilla";
  }
  return "?";
}

struct NormTraceSpec {
  CellKind kind = CellKind::vanilla;
  std::size_t input_dim = 16;
  std::size_t state_dim = 32;
  std::size_t hidden_dim = 16;  // ernn inner width
  std::size_t iters = 3;        // ernn iteration count
  std::size_t seq_len = 100;    // L
  std::size_t probe_index = 1;  // p, 1-based frame index of the probed state
  std::size_t probes = 8;
  std::uint64_t seed = 7;
  // vanilla only: if > 0, the recurrent matrix is set to this spectral norm
  // times a random rotation, making the contraction bound exact.
  double rec_spectral_norm = 0.0;
};

// Backpropagated state-to-state sensitivity: for c = p+1..L, the 2-norm of
// u^T (d h_c / d h_p) averaged over random unit probes u. How this trace
// decays (or not) with distance is the training-dynamics story told by the
// bench report; only the vanilla cell has an assertable analytic bound.
inline std::vector<double> measure_state_gradient_norms(const NormTraceSpec& spec) {
  using T = double;
  if (spec.seq_len < 2 || spec.probe_index >= spec.seq_len)
    throw std::invalid_argument("norm trace: need probe index < sequence length, L >= 2");
  Rng rng(spec.seed);
  ParameterStore<T> store;

  ErnnCell<T> ernn;
  LstmCell<T> lstm;
  VanillaCell<T> vanilla;
  if (spec.kind == CellKind::ernn) {
    ErnnConfig ec{spec.input_dim, spec.state_dim, spec.hidden_dim, spec.iters};
    ernn = ErnnCell<T>::create(store, ec, "cell.");
    ernn.init(rng);
  } else if (spec.kind == CellKind::lstm) {
    lstm = LstmCell<T>::create(store, spec.input_dim, spec.state_dim, "cell.");
    lstm.init(rng);
  } else {
    vanilla = VanillaCell<T>::create(store, spec.input_dim, spec.state_dim, "cell.");
    init_glorot(*vanilla.in_w, spec.input_dim, spec.state_dim, rng);
    init_glorot(*vanilla.rec_w, spec.state_dim, spec.state_dim, rng);
    if (spec.rec_spectral_norm > 0.0) {
      const Tensor<double> q = random_orthogonal(spec.state_dim, rng);
      for (std::size_t i = 0; i < q.size(); ++i)
        vanilla.rec_w->value[i] = spec.rec_spectral_norm * q[i];
    }
  }

  // Fixed input sequence.
  std::vector<Tensor<T>> inputs;
  inputs.reserve(spec.seq_len);
  for (std::size_t t = 0; t < spec.seq_len; ++t) {
    Tensor<T> x({spec.input_dim});
    for (auto& v : x.data) v = rng.gaussian();
    inputs.push_back(std::move(x));
  }

  // Plain-run to the probed frame to get the state there.
  std::vector<T> h(spec.state_dim, T(0)), c(spec.state_dim, T(0));
  std::vector<T> hn(spec.state_dim), scratch;
  auto ernn_scratch = spec.kind == CellKind::ernn
                          ? std::make_unique<typename ErnnCell<T>::Scratch>(ernn.cfg)
                          : nullptr;
  auto lstm_scratch = spec.kind == CellKind::lstm
                          ? std::make_unique<typename LstmCell<T>::Scratch>(spec.state_dim)
                          : nullptr;
  for (std::size_t t = 1; t <= spec.probe_index; ++t) {
    const T* x = inputs[t - 1].data.data();
    if (spec.kind == CellKind::ernn) {
      ernn.step(x, h.data(), hn.data(), *ernn_scratch);
      h.swap(hn);
    } else if (spec.kind == CellKind::lstm) {
      lstm.step(x, h.data(), c.data(), *lstm_scratch);
    } else {
      vanilla.step(x, h.data(), hn.data(), scratch);
      h.swap(hn);
    }
  }

  // Record frames p+1..L with h_p as a tracked leaf.
  ad::Tape<T> tape;
  const ad::ValueId h_leaf = tape.leaf(Tensor<T>::from(std::vector<T>(h.begin(), h.end())));
  typename ErnnCell<T>::Nodes ernn_nodes;
  typename LstmCell<T>::Nodes lstm_nodes;
  typename VanillaCell<T>::Nodes vanilla_nodes;
  if (spec.kind == CellKind::ernn)
    ernn_nodes = ernn.bind_tape(tape);
  else if (spec.kind == CellKind::lstm)
    lstm_nodes = lstm.bind_tape(tape);
  else
    vanilla_nodes = vanilla.bind_tape(tape);

  ad::ValueId hc = h_leaf;
  ad::ValueId cc = tape.constant(Tensor<T>::from(std::vector<T>(c.begin(), c.end())));
  std::vector<ad::ValueId> states;
  for (std::size_t t = spec.probe_index + 1; t <= spec.seq_len; ++t) {
    const ad::ValueId x = tape.constant(inputs[t - 1]);
    if (spec.kind == CellKind::ernn) {
      hc = ernn.step_node(tape, ernn_nodes, x, hc);
    } else if (spec.kind == CellKind::lstm) {
      auto [h2, c2] = lstm.step_node(tape, lstm_nodes, x, hc, cc);
      hc = h2;
      cc = c2;
    } else {
      hc = vanilla.step_node(tape, vanilla_nodes, x, hc);
    }
    states.push_back(hc);
  }

  std::vector<double> trace(states.size(), 0.0);
  std::vector<T> probe(spec.state_dim);
  for (std::size_t j = 0; j < spec.probes; ++j) {
    double norm = 0;
    for (auto& v : probe) {
      v = rng.gaussian();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : probe) v /= static_cast<T>(norm);
    for (std::size_t ci = 0; ci < states.size(); ++ci) {
      tape.backward_seeded(states[ci], probe);
      const Tensor<T>& g = tape.grad(h_leaf);
      double acc = 0;
      for (T v : g.data) acc += static_cast<double>(v) * static_cast<double>(v);
      trace[ci] += std::sqrt(acc);
    }
  }
  for (auto& v : trace) v /= static_cast<double>(spec.probes);
  return trace;
}

// ---------------------------------------------------------------------------
// Real-time factor of the streaming engine, single thread.
// ---------------------------------------------------------------------------

struct RtfReport {
  double rtf = 0.0;            // median over repetitions
  double audio_seconds = 0.0;
  std::size_t repetitions = 0;
  double frame_p50_us = 0.0;
  double frame_p90_us = 0.0;
  double frame_p99_us = 0.0;
};

template <Scalar T>
RtfReport rtf_benchmark(const MaskModel<T>& model, double audio_seconds, std::size_t reps,
                        std::uint64_t seed = 99) {
  if (audio_seconds < 10.0)
    throw std::invalid_argument("rtf_benchmark: need at least 10 s of audio");
  if (reps == 0) reps = 1;
  StftConfig cfg;
  const auto num_samples =
      static_cast<std::size_t>(audio_seconds * static_cast<double>(cfg.sample_rate));
  Rng rng(seed);
  std::vector<T> audio(num_samples);
  for (auto& v : audio) v = static_cast<T>(rng.uniform(-0.5, 0.5));

  std::vector<double> rtfs;
  std::vector<double> frame_us;
  for (std::size_t r = 0; r < reps; ++r) {
    StreamEnhancer<T> stream(model, cfg);
    std::size_t emitted = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t pos = 0; pos < num_samples; pos += cfg.hop) {
      const std::size_t n = std::min(cfg.hop, num_samples - pos);
      const auto f0 = std::chrono::steady_clock::now();
      emitted += stream.push(std::span<const T>(audio.data() + pos, n)).size();
      const auto f1 = std::chrono::steady_clock::now();
      frame_us.push_back(std::chrono::duration<double, std::micro>(f1 - f0).count());
    }
    emitted += stream.flush().size();
    const auto t1 = std::chrono::steady_clock::now();
    if (emitted != num_samples)
      throw std::logic_error("rtf_benchmark: length contract violated");
    rtfs.push_back(std::chrono::duration<double>(t1 - t0).count() / audio_seconds);
  }

  auto percentile = [](std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(p * static_cast<double>(v.size() - 1));
    return v[idx];
  };
  RtfReport rep;
  rep.audio_seconds = audio_seconds;
  rep.repetitions = reps;
  rep.rtf = percentile(rtfs, 0.5);
  rep.frame_p50_us = percentile(frame_us, 0.5);
  rep.frame_p90_us = percentile(frame_us, 0.9);
  rep.frame_p99_us = percentile(frame_us, 0.99);
  return rep;
}

}  // namespace ernn

#endif  // ERNN_DIAGNOSTICS_H_
