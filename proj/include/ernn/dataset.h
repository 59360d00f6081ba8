// ernn/dataset.h

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

#ifndef ERNN_DATASET_H_
#define ERNN_DATASET_H_

#include <cstddef>
#include <string>
#include <vector>

#include "ernn/rng.h"

namespace ernn {

// Aligned noisy/clean recording of the same scene: noisy = clean + noise.
struct UtterancePair {
  std::string id;
  std::vector<double> noisy;
  std::vector<double> clean;
};

// Directory of `<id>_noisy.wav` / `<id>_clean.wav` pairs.
std::vector<UtterancePair> load_pair_directory(const std::string& dir);

// Manifest of `noisy_path<TAB>clean_path` lines.
std::vector<UtterancePair> load_pair_manifest(const std::string& path);

inline constexpr std::size_t kSegmentSamples = 16000;  // one second at 16 kHz

struct Segment {
  std::vector<double> noisy;
  std::vector<double> clean;
};

// One random aligned window per draw; shorter utterances are zero-padded at
// the tail so the segment is always exactly one second.
inline Segment sample_segment(const UtterancePair& pair, Rng& rng,
                              std::size_t segment_len = kSegmentSamples) {
  Segment seg;
  seg.noisy.assign(segment_len, 0.0);
  seg.clean.assign(segment_len, 0.0);
  const std::size_t n = pair.noisy.size();
  std::size_t offset = 0;
  if (n > segment_len) offset = static_cast<std::size_t>(rng.below(n - segment_len + 1));
  const std::size_t take = std::min(segment_len, n - offset);
  for (std::size_t i = 0; i < take; ++i) {
    seg.noisy[i] = pair.noisy[offset + i];
    seg.clean[i] = pair.clean[offset + i];
  }
  return seg;
}

}  // namespace ernn

#endif  // ERNN_DATASET_H_
