// ernn/training.h

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

#ifndef ERNN_TRAINING_H_
#define ERNN_TRAINING_H_

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ernn/autodiff.h"
#include "ernn/dataset.h"
#include "ernn/dsp.h"
#include "ernn/model.h"
#include "ernn/optimizer.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ernn {

// ---------------------------------------------------------------------------
// Masked inverse STFT as one recorded op. The observation X is a constant of
// the loss; gradients flow through the per-frame masks only. The hand-derived
// backward is the synthesis adjoint: window the upstream signal gradient with
// the dual window, forward-transform it, and fold the Hermitian mirror into
// the one-sided bins (factor 2 everywhere except DC and Nyquist).
// ---------------------------------------------------------------------------
template <Scalar T>
ad::ValueId masked_istft_node(ad::Tape<T>& tape, const std::vector<ad::ValueId>& frame_masks,
                              std::shared_ptr<const Spectrogram<T>> observation,
                              std::shared_ptr<const WindowPair<T>> windows,
                              std::size_t out_len) {
  const Spectrogram<T>& x = *observation;
  const StftConfig cfg = x.cfg;
  if (frame_masks.size() != x.frames)
    throw std::invalid_argument("masked_istft: mask frame count mismatch");
  if (out_len > stft_coverage(x.frames, cfg))
    throw std::invalid_argument("masked_istft: output length exceeds analysis span");
  const std::size_t nb = cfg.bins();

  const Fft<T> fft(cfg.fft_len);
  Tensor<T> out({out_len});
  out.fill(T(0));
  {
    std::vector<std::complex<T>> scratch(cfg.fft_len);
    std::vector<std::complex<T>> masked(nb);
    std::vector<T> frame(cfg.window_len);
    for (std::size_t tau = 0; tau < x.frames; ++tau) {
      const Tensor<T>& mask = tape.value(frame_masks[tau]);
      if (mask.size() != nb) throw std::invalid_argument("masked_istft: mask size mismatch");
      const std::complex<T>* bins = x.frame(tau);
      for (std::size_t om = 0; om < nb; ++om) masked[om] = mask[om] * bins[om];
      istft_synthesize_frame(masked.data(), cfg, windows->synthesis, fft, scratch.data(),
                             frame.data());
      const long long start = stft_frame_start(tau, cfg);
      for (std::size_t i = 0; i < cfg.window_len; ++i) {
        const long long idx = start + static_cast<long long>(i);
        if (idx >= 0 && idx < static_cast<long long>(out_len))
          out[static_cast<std::size_t>(idx)] += frame[i];
      }
    }
  }

  auto backward = [observation, windows, out_len](ad::Tape<T>& tp,
                                                  const std::vector<ad::ValueId>& parents,
                                                  const Tensor<T>& upstream) {
    const Spectrogram<T>& xs = *observation;
    const StftConfig& c = xs.cfg;
    const std::size_t bins = c.bins();
    const Fft<T> plan(c.fft_len);
    std::vector<std::complex<T>> u(c.fft_len);
    const T inv_n = T(1) / static_cast<T>(c.fft_len);
    for (std::size_t tau = 0; tau < xs.frames; ++tau) {
      const long long start = stft_frame_start(tau, c);
      for (std::size_t i = 0; i < c.window_len; ++i) {
        const long long idx = start + static_cast<long long>(i);
        const T g = (idx >= 0 && idx < static_cast<long long>(out_len))
                        ? upstream[static_cast<std::size_t>(idx)]
                        : T(0);
        u[i] = std::complex<T>(windows->synthesis[i] * g, T(0));
      }
      for (std::size_t i = c.window_len; i < c.fft_len; ++i) u[i] = std::complex<T>(0, 0);
      plan.forward(u.data());
      Tensor<T>& gmask = tp.grad(parents[tau]);
      const std::complex<T>* xbins = xs.frame(tau);
      for (std::size_t om = 0; om < bins; ++om) {
        const std::complex<T> w = u[om] * inv_n;
        const T fold = (om == 0 || om == bins - 1) ? T(1) : T(2);
        gmask[om] += fold * (xbins[om].real() * w.real() + xbins[om].imag() * w.imag());
      }
    }
  };

  std::vector<ad::ValueId> parents = frame_masks;
  return tape.custom(parents,
                     std::move(out), [parents, backward](ad::Tape<T>& tp, const Tensor<T>& g) {
                       backward(tp, parents, g);
                     });
}

// ---------------------------------------------------------------------------
// Time-domain mean absolute error through masking and resynthesis:
// loss = (1/L) sum_t | s_t - istft(M(Psi) . X)_t |
// ---------------------------------------------------------------------------
template <Scalar T>
struct LossGraph {
  ad::ValueId loss;
  std::vector<ad::ValueId> masks;
  typename MaskModel<T>::TapeCtx ctx;
};

template <Scalar T>
LossGraph<T> mae_time_loss_graph(ad::Tape<T>& tape, MaskModel<T>& model,
                                 std::span<const T> clean, std::span<const T> noisy,
                                 const StftConfig& cfg, const WindowPair<T>& wp) {
  if (clean.size() != noisy.size())
    throw std::invalid_argument("mae_time_loss: clean/noisy length mismatch");
  if (clean.empty()) throw std::invalid_argument("mae_time_loss: empty input");

  auto observation = std::make_shared<Spectrogram<T>>(stft<T>(noisy, cfg, wp));
  auto windows = std::make_shared<WindowPair<T>>(wp);
  const Tensor<T> features = log_magnitude(*observation);

  LossGraph<T> g;
  g.ctx = model.bind(tape);
  g.masks.reserve(observation->frames);
  for (std::size_t tau = 0; tau < observation->frames; ++tau) {
    Tensor<T> feat({features.cols()});
    for (std::size_t i = 0; i < features.cols(); ++i) feat[i] = features.at2(tau, i);
    const ad::ValueId feat_node = tape.constant(std::move(feat));
    g.masks.push_back(model.step_node(tape, g.ctx, feat_node));
  }

  const ad::ValueId estimate =
      masked_istft_node<T>(tape, g.masks, observation, windows, clean.size());
  Tensor<T> target({clean.size()});
  for (std::size_t i = 0; i < clean.size(); ++i) target[i] = clean[i];
  g.loss = tape.mean_abs_diff(estimate, std::move(target));
  return g;
}

// Convenience scalar version (used by tests and finite differences).
template <Scalar T>
T mae_time_loss_value(MaskModel<T>& model, std::span<const T> clean, std::span<const T> noisy,
                      const StftConfig& cfg, const WindowPair<T>& wp) {
  ad::Tape<T> tape;
  return tape.value(mae_time_loss_graph(tape, model, clean, noisy, cfg, wp).loss)[0];
}

// ---------------------------------------------------------------------------
// Epoch loop.
// ---------------------------------------------------------------------------

struct TrainConfig {
  std::size_t batch_size = 16;
  std::size_t segment_len = kSegmentSamples;
  std::size_t epochs = 200;
  double lr = 0.0001;
  std::uint64_t seed = 1234;
  std::size_t checkpoint_every = 25;  // epochs; 0 disables periodic saves
  int threads = 1;

  void validate() const {
    if (batch_size == 0 || segment_len == 0 || epochs == 0 || lr <= 0)
      throw std::invalid_argument("train config: positive values required");
  }
};

struct EpochStats {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double wall_seconds = 0.0;
};

class TrainAbort : public std::runtime_error {
 public:
  TrainAbort(std::size_t epoch, std::size_t batch, double loss, const std::string& detail = "")
      : std::runtime_error("non-finite loss " + std::to_string(loss) + " at epoch " +
                           std::to_string(epoch) + ", batch " + std::to_string(batch) +
                           (detail.empty() ? "" : ": " + detail)),
        epoch_(epoch),
        batch_(batch),
        loss_(loss) {}
  std::size_t epoch() const { return epoch_; }
  std::size_t batch() const { return batch_; }
  double loss() const { return loss_; }

 private:
  std::size_t epoch_, batch_;
  double loss_;
};

// Runs the optimizer over the dataset: per epoch, shuffle utterances, draw
// one segment each, group into batches (last partial batch kept), average
// the per-item losses, backpropagate and take one Adam step per batch.
// Per-item graphs may be evaluated in parallel; gradients are reduced in
// item order, so the result does not depend on the thread count.
template <Scalar T>
std::vector<EpochStats> train(const std::vector<UtterancePair>& dataset, MaskModel<T>& model,
                              AdamState<T>& adam, const TrainConfig& cfg,
                              const std::function<void(const EpochStats&)>& on_epoch = {},
                              const std::function<void(std::size_t)>& on_checkpoint = {}) {
  cfg.validate();
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");

  StftConfig stft_cfg;
  const WindowPair<T> wp = WindowPair<T>::hann(stft_cfg);
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<EpochStats> stats;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    rng.shuffle(order.begin(), order.end());

    // Segments are drawn serially up front so the draw sequence is part of
    // the seed contract, independent of batch-level parallelism.
    std::vector<Segment> segments;
    segments.reserve(order.size());
    for (std::size_t idx : order)
      segments.push_back(sample_segment(dataset[idx], rng, cfg.segment_len));

    double epoch_loss = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < segments.size(); begin += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, segments.size() - begin);
      std::vector<std::unique_ptr<ad::Tape<T>>> tapes(count);
      std::vector<double> losses(count, 0.0);
      std::vector<std::string> failures(count);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.threads) \
    if (cfg.threads > 1 && count > 1)
#endif
      for (long long i = 0; i < static_cast<long long>(count); ++i) {
        const Segment& seg = segments[begin + static_cast<std::size_t>(i)];
        std::vector<T> clean(seg.clean.begin(), seg.clean.end());
        std::vector<T> noisy(seg.noisy.begin(), seg.noisy.end());
        try {
          auto tape = std::make_unique<ad::Tape<T>>();
          const LossGraph<T> g =
              mae_time_loss_graph<T>(*tape, model, clean, noisy, stft_cfg, wp);
          losses[static_cast<std::size_t>(i)] = tape->value(g.loss)[0];
          tape->backward(g.loss);
          tapes[static_cast<std::size_t>(i)] = std::move(tape);
        } catch (const std::exception& e) {
          failures[static_cast<std::size_t>(i)] = e.what();
        }
      }

      for (std::size_t i = 0; i < count; ++i)
        if (!failures[i].empty())
          throw TrainAbort(epoch, batch_index, std::numeric_limits<double>::quiet_NaN(),
                           failures[i]);
      for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(losses[i])) throw TrainAbort(epoch, batch_index, losses[i]);
        epoch_loss += losses[i];
      }
      const T item_weight = T(1) / static_cast<T>(count);
      for (std::size_t i = 0; i < count; ++i) tapes[i]->add_param_grads_to_store(item_weight);
      adam_step(model.params(), adam);
      ++batch_index;
    }

    EpochStats es;
    es.epoch = epoch;
    es.mean_loss = epoch_loss / static_cast<double>(segments.size());
    es.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    stats.push_back(es);
    if (on_epoch) on_epoch(es);
    if (on_checkpoint && cfg.checkpoint_every > 0 && epoch % cfg.checkpoint_every == 0 &&
        epoch != cfg.epochs)
      on_checkpoint(epoch);
  }
  if (on_checkpoint) on_checkpoint(cfg.epochs);
  return stats;
}

}  // namespace ernn

#endif  // ERNN_TRAINING_H_
