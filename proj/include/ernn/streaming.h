// ernn/streaming.h

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

#ifndef ERNN_STREAMING_H_
#define ERNN_STREAMING_H_

#include <algorithm>
#include <complex>
#include <cstring>
#include <span>
#include <stdexcept>
#include <vector>

#include "ernn/dsp.h"
#include "ernn/model.h"

namespace ernn {

// Offline enhancement: analyze, mask frame by frame from zero state,
// resynthesize at the input length.
template <Scalar T>
std::vector<T> enhance_offline(const MaskModel<T>& model, std::span<const T> x,
                               const StftConfig& cfg, const WindowPair<T>& wp) {
  const Spectrogram<T> spec = stft(x, cfg, wp);
  const Tensor<T> features = log_magnitude(spec);
  const Tensor<T> masks = model.forward_masks(features);
  const Spectrogram<T> masked = apply_mask(spec, masks);
  return istft(masked, wp, x.size());
}

// Frame-by-frame engine: push raw samples in, pull enhanced samples out.
//
// A frame is computed whenever 256 fresh samples complete a 512-sample
// window; a sample is emitted once both frames covering it are synthesized,
// i.e. with an algorithmic latency of exactly one window (512 samples).
// Per-frame arithmetic is byte-for-byte the offline path (same analysis,
// same cell kernels, same overlap-add terms), so streaming output matches
// enhance_offline bit-exactly, for any way the input is chunked.
template <Scalar T>
class StreamEnhancer {
 public:
  explicit StreamEnhancer(const MaskModel<T>& model, const StftConfig& cfg = StftConfig{})
      : model_(model),
        cfg_(cfg),
        wp_(WindowPair<T>::hann(cfg)),
        fft_(cfg.fft_len),
        state_(model.initial_state()),
        window_(cfg.window_len, T(0)),
        staging_(cfg.hop),
        ola_(cfg.window_len, T(0)),
        scratch_(cfg.fft_len),
        bins_(cfg.bins()),
        feat_(cfg.bins()),
        mask_(cfg.bins()),
        frame_(cfg.window_len) {
    if (model.config().feature_dim != cfg.bins())
      throw std::invalid_argument("stream: model feature dim " +
                                  std::to_string(model.config().feature_dim) +
                                  " does not match " + std::to_string(cfg.bins()) + " bins");
  }

  bool closed() const { return closed_; }
  std::size_t samples_pushed() const { return pushed_; }
  std::size_t frames_processed() const { return frames_; }

  // Accepts any chunk size; returns every sample that became final.
  std::vector<T> push(std::span<const T> chunk) {
    if (closed_) throw std::logic_error("stream: push after flush");
    std::vector<T> out;
    for (const T v : chunk) {
      staging_[staged_++] = v;
      ++pushed_;
      if (staged_ == cfg_.hop) {
        process_frame(out, pushed_);
        staged_ = 0;
      }
    }
    return out;
  }

  // Completes the tail frames with zeros exactly like the offline analysis,
  // emits the remaining samples and closes the stream.
  std::vector<T> flush() {
    if (closed_) throw std::logic_error("stream: double flush");
    closed_ = true;
    std::vector<T> out;
    if (pushed_ == 0) return out;
    const std::size_t total_frames = stft_frame_count(pushed_, cfg_);
    while (frames_ < total_frames) {
      while (staged_ < cfg_.hop) staging_[staged_++] = T(0);
      process_frame(out, pushed_);
      staged_ = 0;
    }
    return out;
  }

 private:
  void process_frame(std::vector<T>& out, std::size_t input_len) {
    const std::size_t hop = cfg_.hop;
    const std::size_t win = cfg_.window_len;
    // Slide the analysis window forward one hop.
    std::memmove(window_.data(), window_.data() + hop, (win - hop) * sizeof(T));
    std::copy(staging_.begin(), staging_.end(), window_.data() + (win - hop));

    for (std::size_t i = 0; i < win; ++i)
      scratch_[i] = std::complex<T>(wp_.analysis[i] * window_[i], T(0));
    for (std::size_t i = win; i < cfg_.fft_len; ++i) scratch_[i] = std::complex<T>(0, 0);
    fft_.forward(scratch_.data());
    const std::size_t nb = cfg_.bins();
    for (std::size_t om = 0; om < nb; ++om) {
      bins_[om] = scratch_[om];
      const T mag = std::abs(bins_[om]);
      feat_[om] = std::log(std::max(mag, static_cast<T>(kLogMagnitudeFloor)));
    }

    model_.step(feat_.data(), state_, mask_.data());
    for (std::size_t om = 0; om < nb; ++om) bins_[om] = mask_[om] * bins_[om];
    istft_synthesize_frame(bins_.data(), cfg_, wp_.synthesis, fft_, scratch_.data(),
                           frame_.data());
    for (std::size_t i = 0; i < win; ++i) ola_[i] += frame_[i];

    // Frame tau spans [(tau-1)*hop, (tau+1)*hop); after it the first hop of
    // the accumulator can never change again.
    const long long frame_lo = stft_frame_start(frames_, cfg_);
    for (std::size_t i = 0; i < hop; ++i) {
      const long long idx = frame_lo + static_cast<long long>(i);
      if (idx >= 0 && idx < static_cast<long long>(input_len)) out.push_back(ola_[i]);
    }
    std::memmove(ola_.data(), ola_.data() + hop, (win - hop) * sizeof(T));
    std::fill(ola_.begin() + static_cast<long>(win - hop), ola_.end(), T(0));
    ++frames_;
  }

  const MaskModel<T>& model_;
  StftConfig cfg_;
  WindowPair<T> wp_;
  Fft<T> fft_;
  typename MaskModel<T>::State state_;
  std::vector<T> window_;
  std::vector<T> staging_;
  std::vector<T> ola_;
  std::vector<std::complex<T>> scratch_;
  std::vector<std::complex<T>> bins_;
  std::vector<T> feat_;
  std::vector<T> mask_;
  std::vector<T> frame_;
  std::size_t staged_ = 0;
  std::size_t pushed_ = 0;
  std::size_t frames_ = 0;
  bool closed_ = false;
};

}  // namespace ernn

#endif  // ERNN_STREAMING_H_
