// ernn/metrics.h

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

#ifndef ERNN_METRICS_H_
#define ERNN_METRICS_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ernn {

inline constexpr double kSiSdrCapDb = 100.0;

// Scale-invariant SDR in dB: project the estimate onto the reference and
// compare projection energy against residual energy. Capped at +100 dB so a
// (near-)perfect estimate does not divide by zero.
inline double si_sdr(std::span<const double> reference, std::span<const double> estimate) {
  if (reference.size() != estimate.size())
    throw std::invalid_argument("si_sdr: length mismatch");
  double ss = 0.0, se = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    ss += reference[i] * reference[i];
    se += estimate[i] * reference[i];
  }
  if (ss <= 0.0) throw std::invalid_argument("si_sdr: zero reference");
  const double alpha = se / ss;
  double target = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double t = alpha * reference[i];
    const double r = estimate[i] - t;
    target += t * t;
    residual += r * r;
  }
  if (residual <= target * 1e-10) return kSiSdrCapDb;
  return std::min(kSiSdrCapDb, 10.0 * std::log10(target / residual));
}

inline constexpr double kSegSnrFloorDb = -10.0;
inline constexpr double kSegSnrCeilDb = 35.0;
inline constexpr double kSegSnrEnergyGate = 1e-10;

// Mean of per-frame 10 log10(||s||^2 / ||s - s_hat||^2), each frame clamped
// to [-10, 35] dB; frames with reference energy at or below the gate are
// skipped. Frame length 256, non-overlapping.
inline double segmental_snr(std::span<const double> reference,
                            std::span<const double> estimate,
                            std::size_t frame_len = 256) {
  if (reference.size() != estimate.size())
    throw std::invalid_argument("segmental_snr: length mismatch");
  if (frame_len == 0) throw std::invalid_argument("segmental_snr: zero frame");
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t start = 0; start + frame_len <= reference.size(); start += frame_len) {
    double es = 0.0, en = 0.0;
    for (std::size_t i = start; i < start + frame_len; ++i) {
      es += reference[i] * reference[i];
      const double d = reference[i] - estimate[i];
      en += d * d;
    }
    if (es <= kSegSnrEnergyGate) continue;
    double db;
    if (en == 0.0)
      db = kSegSnrCeilDb;
    else
      db = 10.0 * std::log10(es / en);
    db = std::min(kSegSnrCeilDb, std::max(kSegSnrFloorDb, db));
    total += db;
    ++used;
  }
  if (used == 0) return 0.0;
  return total / static_cast<double>(used);
}

}  // namespace ernn

#endif  // ERNN_METRICS_H_
