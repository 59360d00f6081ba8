// ernn/dsp.h

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

#ifndef ERNN_DSP_H_
#define ERNN_DSP_H_

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ernn/fft.h"
#include "ernn/kernels.h"
#include "ernn/tensor.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ernn {

// Analysis grid: periodic Hann, 50% overlap, one-sided spectra.
//
// Frames are laid on the hop lattice extended one slot before the signal:
// frame tau covers samples [tau*hop - (window-hop), tau*hop + hop). The
// pre-frame (tau = 0) sees only zeros plus the first hop of signal, so every sample
// from index 0 on is analyzed by both windows that overlap it and
// overlap-add with the canonical dual reconstructs the full signal exactly.
// All padding is zeros already in the past or at the tail; no sample is
// ever windowed with future content, which keeps the streaming path on the
// identical lattice.
struct StftConfig {
  std::size_t window_len = 512;
  std::size_t hop = 256;
  std::size_t fft_len = 512;
  std::size_t sample_rate = 16000;

  std::size_t bins() const { return fft_len / 2 + 1; }
  std::size_t head_pad() const { return window_len - hop; }

  void validate() const {
    if (window_len == 0 || hop == 0 || fft_len < window_len)
      throw std::invalid_argument("stft config: bad extents");
    if (window_len % hop != 0)
      throw std::invalid_argument("stft config: hop must divide window length");
    if ((fft_len & (fft_len - 1)) != 0)
      throw std::invalid_argument("stft config: fft length must be a power of two");
  }
};

inline std::size_t stft_frame_count(std::size_t num_samples, const StftConfig& cfg) {
  if (num_samples == 0) throw std::invalid_argument("stft: empty input");
  return (num_samples - 1) / cfg.hop + 2;
}

// Start sample of frame tau; negative indices read zeros.
inline long long stft_frame_start(std::size_t tau, const StftConfig& cfg) {
  return static_cast<long long>(tau) * static_cast<long long>(cfg.hop) -
         static_cast<long long>(cfg.head_pad());
}

// Longest waveform an analysis of `frames` frames can reconstruct exactly.
inline std::size_t stft_coverage(std::size_t frames, const StftConfig& cfg) {
  if (frames < 2) return 0;
  return (frames - 1) * cfg.hop;
}

// Periodic (DFT-even) Hann: w[n] = 0.5 (1 - cos(2 pi n / N)).
template <Scalar T>
Tensor<T> hann_window(std::size_t n) {
  if (n == 0 || n % 2 != 0) throw std::invalid_argument("hann_window: even length required");
  Tensor<T> w({n});
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(6.283185307179586476925286766559 *
                              static_cast<double>(i) / static_cast<double>(n));
    w[i] = static_cast<T>(0.5 * (1.0 - c));
  }
  return w;
}

// w_d[n] = w[n] / sum_k w[n + k*hop]^2.
template <Scalar T>
Tensor<T> canonical_dual_window(const Tensor<T>& w, std::size_t hop) {
  const std::size_t n = w.size();
  if (hop == 0 || n % hop != 0)
    throw std::invalid_argument("canonical_dual_window: hop must divide window length");
  Tensor<T> dual({n});
  for (std::size_t i = 0; i < n; ++i) {
    double denom = 0.0;
    for (std::size_t k = i % hop; k < n; k += hop)
      denom += static_cast<double>(w[k]) * static_cast<double>(w[k]);
    if (denom <= 0.0)
      throw std::runtime_error("canonical_dual_window: window not invertible at phase " +
                               std::to_string(i % hop));
    dual[i] = static_cast<T>(static_cast<double>(w[i]) / denom);
  }
  return dual;
}

template <Scalar T>
struct WindowPair {
  Tensor<T> analysis;
  Tensor<T> synthesis;

  static WindowPair hann(const StftConfig& cfg) {
    cfg.validate();
    WindowPair wp;
    wp.analysis = hann_window<T>(cfg.window_len);
    wp.synthesis = canonical_dual_window(wp.analysis, cfg.hop);
    return wp;
  }
};

template <Scalar T>
struct Spectrogram {
  StftConfig cfg;
  std::size_t frames = 0;
  std::vector<std::complex<T>> data;  // frame-major, bins() per frame

  std::complex<T>* frame(std::size_t tau) { return data.data() + tau * cfg.bins(); }
  const std::complex<T>* frame(std::size_t tau) const { return data.data() + tau * cfg.bins(); }
  std::complex<T>& at(std::size_t tau, std::size_t om) { return data[tau * cfg.bins() + om]; }
  const std::complex<T>& at(std::size_t tau, std::size_t om) const {
    return data[tau * cfg.bins() + om];
  }
};

// One analysis frame: gather + window + FFT + keep one-sided bins.
// Shared verbatim by the offline and streaming paths.
template <Scalar T>
void stft_analyze_frame(std::span<const T> x, long long start, const StftConfig& cfg,
                        const Tensor<T>& window, const Fft<T>& fft,
                        std::complex<T>* scratch, std::complex<T>* out_bins) {
  const long long n = static_cast<long long>(x.size());
  for (std::size_t i = 0; i < cfg.window_len; ++i) {
    const long long idx = start + static_cast<long long>(i);
    const T v = (idx >= 0 && idx < n) ? x[static_cast<std::size_t>(idx)] : T(0);
    scratch[i] = std::complex<T>(window[i] * v, T(0));
  }
  for (std::size_t i = cfg.window_len; i < cfg.fft_len; ++i) scratch[i] = std::complex<T>(0, 0);
  fft.forward(scratch);
  for (std::size_t om = 0; om < cfg.bins(); ++om) out_bins[om] = scratch[om];
}

// Expand one-sided bins to a full Hermitian spectrum, inverse FFT, return
// the real synthesis frame scaled by the dual window.
template <Scalar T>
void istft_synthesize_frame(const std::complex<T>* bins, const StftConfig& cfg,
                            const Tensor<T>& dual, const Fft<T>& fft,
                            std::complex<T>* scratch, T* out_frame) {
  const std::size_t nb = cfg.bins();
  for (std::size_t om = 0; om < nb; ++om) scratch[om] = bins[om];
  for (std::size_t k = nb; k < cfg.fft_len; ++k)
    scratch[k] = std::conj(bins[cfg.fft_len - k]);
  fft.inverse(scratch);
  for (std::size_t i = 0; i < cfg.window_len; ++i)
    out_frame[i] = dual[i] * scratch[i].real();
}

template <Scalar T>
Spectrogram<T> stft(std::span<const T> x, const StftConfig& cfg, const WindowPair<T>& wp) {
  cfg.validate();
  const std::size_t frames = stft_frame_count(x.size(), cfg);
  Spectrogram<T> spec;
  spec.cfg = cfg;
  spec.frames = frames;
  spec.data.assign(frames * cfg.bins(), std::complex<T>(0, 0));
  const Fft<T> fft(cfg.fft_len);
  const int threads = kernels::num_threads();
#ifdef _OPENMP
#pragma omp parallel num_threads(threads) if (threads > 1 && frames >= 8)
#endif
  {
    std::vector<std::complex<T>> scratch(cfg.fft_len);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (long long tau = 0; tau < static_cast<long long>(frames); ++tau) {
      stft_analyze_frame(x, stft_frame_start(static_cast<std::size_t>(tau), cfg), cfg,
                         wp.analysis, fft, scratch.data(),
                         spec.frame(static_cast<std::size_t>(tau)));
    }
  }
  return spec;
}

// Overlap-add synthesis. Frames are processed in two interleaved passes
// (even starts, then odd) so writes never race; with exactly two overlapping
// contributions per sample the result is bit-identical to the serial order.
template <Scalar T>
std::vector<T> istft(const Spectrogram<T>& spec, const WindowPair<T>& wp,
                     std::size_t out_len) {
  spec.cfg.validate();
  const StftConfig& cfg = spec.cfg;
  if (spec.frames < 2) throw std::invalid_argument("istft: spectrogram too short");
  const std::size_t span = stft_coverage(spec.frames, cfg);
  if (out_len > span)
    throw std::invalid_argument("istft: requested " + std::to_string(out_len) +
                                " samples but analysis covers only " + std::to_string(span));
  std::vector<T> out(out_len, T(0));
  const Fft<T> fft(cfg.fft_len);
  const int threads = kernels::num_threads();
  for (int parity = 0; parity < 2; ++parity) {
#ifdef _OPENMP
#pragma omp parallel num_threads(threads) if (threads > 1 && spec.frames >= 8)
#endif
    {
      std::vector<std::complex<T>> scratch(cfg.fft_len);
      std::vector<T> frame(cfg.window_len);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
      for (long long t2 = 0; t2 < static_cast<long long>(spec.frames); ++t2) {
        const auto tau = static_cast<std::size_t>(t2);
        if (tau % 2 != static_cast<std::size_t>(parity)) continue;
        istft_synthesize_frame(spec.frame(tau), cfg, wp.synthesis, fft, scratch.data(),
                               frame.data());
        const long long start = stft_frame_start(tau, cfg);
        for (std::size_t i = 0; i < cfg.window_len; ++i) {
          const long long idx = start + static_cast<long long>(i);
          if (idx >= 0 && idx < static_cast<long long>(out_len))
            out[static_cast<std::size_t>(idx)] += frame[i];
        }
      }
    }
  }
  return out;
}

inline constexpr double kLogMagnitudeFloor = 1e-7;

// Psi = ln(max(|X|, 1e-7)), frames x bins.
template <Scalar T>
Tensor<T> log_magnitude(const Spectrogram<T>& spec) {
  Tensor<T> feat({spec.frames, spec.cfg.bins()});
  const std::size_t nb = spec.cfg.bins();
  for (std::size_t tau = 0; tau < spec.frames; ++tau)
    for (std::size_t om = 0; om < nb; ++om) {
      const T mag = std::abs(spec.at(tau, om));
      feat.at2(tau, om) = std::log(std::max(mag, static_cast<T>(kLogMagnitudeFloor)));
    }
  return feat;
}

// S_hat = G * X elementwise, G real in (0,1).
template <Scalar T>
Spectrogram<T> apply_mask(const Spectrogram<T>& spec, const Tensor<T>& mask) {
  if (mask.rank() != 2 || mask.rows() != spec.frames || mask.cols() != spec.cfg.bins())
    throw std::invalid_argument("apply_mask: mask " + shape_string(mask.shape) +
                                " does not match spectrogram (" + std::to_string(spec.frames) +
                                "x" + std::to_string(spec.cfg.bins()) + ")");
  Spectrogram<T> out = spec;
  const std::size_t nb = spec.cfg.bins();
  for (std::size_t tau = 0; tau < spec.frames; ++tau)
    for (std::size_t om = 0; om < nb; ++om) out.at(tau, om) = mask.at2(tau, om) * spec.at(tau, om);
  return out;
}

}  // namespace ernn

#endif  // ERNN_DSP_H_
