// ernn/fft.h

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

#ifndef ERNN_FFT_H_
#define ERNN_FFT_H_

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ernn {

// Iterative radix-2 complex FFT for power-of-two sizes. Twiddles are
// precomputed in double and cast, so float and double plans agree to
// float rounding. Forward is unnormalized; inverse carries the 1/n.
template <class T>
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw std::invalid_argument("fft: size must be a power of two >= 2");
    rev_.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
      rev_[i] = r;
    }
    // Twiddles for each butterfly stage, forward sign (e^{-i 2 pi k / len}).
    tw_.resize(log2n);
    for (std::size_t s = 0; s < log2n; ++s) {
      const std::size_t len = std::size_t{2} << s;
      tw_[s].resize(len / 2);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const double ang = -6.283185307179586476925286766559 *
                           static_cast<double>(k) / static_cast<double>(len);
        tw_[s][k] = std::complex<T>(static_cast<T>(std::cos(ang)),
                                    static_cast<T>(std::sin(ang)));
      }
    }
  }

  std::size_t size() const { return n_; }

  // In-place DFT: a[k] = sum_n a[n] e^{-i 2 pi k n / N}.
  void forward(std::complex<T>* a) const { transform(a, /*invert=*/false); }

  // In-place inverse DFT including the 1/N factor.
  void inverse(std::complex<T>* a) const {
    transform(a, /*invert=*/true);
    const T scale = T(1) / static_cast<T>(n_);
    for (std::size_t i = 0; i < n_; ++i) a[i] *= scale;
  }

 private:
  void transform(std::complex<T>* a, bool invert) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (std::size_t s = 0; s < tw_.size(); ++s) {
      const std::size_t len = std::size_t{2} << s;
      const std::size_t half = len / 2;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t k = 0; k < half; ++k) {
          std::complex<T> w = tw_[s][k];
          if (invert) w = std::conj(w);
          const std::complex<T> u = a[start + k];
          const std::complex<T> v = a[start + k + half] * w;
          a[start + k] = u + v;
          a[start + k + half] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<std::vector<std::complex<T>>> tw_;
};

}  // namespace ernn

#endif  // ERNN_FFT_H_
