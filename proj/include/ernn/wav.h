// ernn/wav.h

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

#ifndef ERNN_WAV_H_
#define ERNN_WAV_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ernn {

enum class WavErrorKind { io, format, channels, sample_rate };

class WavError : public std::runtime_error {
 public:
  WavError(WavErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  WavErrorKind kind() const { return kind_; }

 private:
  WavErrorKind kind_;
};

// Mono 16 kHz only; PCM 16-bit scaled by 1/32768, IEEE float passed through.
std::vector<double> load_wav(const std::string& path);

struct WavWriteStats {
  std::size_t clipped = 0;
};

// 16-bit PCM, 16 kHz mono. Samples are clipped to [-1, 1) before
// quantization; the clip count is returned.
WavWriteStats write_wav(const std::string& path, const std::vector<double>& samples,
                        std::size_t sample_rate = 16000);

}  // namespace ernn

#endif  // ERNN_WAV_H_
