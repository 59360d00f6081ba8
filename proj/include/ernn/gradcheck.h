// ernn/gradcheck.h

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

#ifndef ERNN_GRADCHECK_H_
#define ERNN_GRADCHECK_H_

#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ernn/params.h"
#include "ernn/rng.h"

namespace ernn {

struct GradCheckReport {
  double max_rel_err = 0.0;
  double loss = 0.0;
  std::size_t probed = 0;
  std::string worst_coordinate;
};

// Central-difference oracle against the tape's analytic gradients, meant to
// run in 64-bit. `eval(with_grad)` recomputes the loss from the store's
// current values; with_grad additionally accumulates into Parameter.grad.
// Each coordinate is tried at several step sizes and the best agreement
// kept, so step-size artifacts (round-off at small h, curvature or a nearby
// |.| / ReLU kink at large h) do not masquerade as gradient bugs; a genuinely
// wrong gradient disagrees at every h.
//
// Coordinates whose gradient sits below the finite-difference noise floor
// (1e-5 of the gradient scale) switch to an absolute comparison against that
// floor: round-off in the loss makes a relative test meaningless there, while
// the absolute arm still flags sign flips and dropped terms.
inline GradCheckReport grad_check(ParameterStore<double>& store,
                                  const std::function<double(bool)>& eval,
                                  std::size_t probe_count, Rng& rng,
                                  std::vector<double> steps = {1e-5, 1e-6, 2e-7}) {
  store.zero_grads();
  GradCheckReport rep;
  rep.loss = eval(true);
  if (!std::isfinite(rep.loss))
    throw std::runtime_error("grad_check: non-finite loss");

  std::vector<Tensor<double>> analytic;
  analytic.reserve(store.count());
  for (std::size_t i = 0; i < store.count(); ++i) analytic.push_back(store.item(i).grad);

  double grad_scale = 0.0;
  for (const auto& g : analytic)
    for (double v : g.data) grad_scale = std::max(grad_scale, std::abs(v));
  const double floor = 1e-5 * std::max(1.0, grad_scale);

  // Scalar parameters (the ERNN step sizes) are always probed; the rest of
  // the budget goes to uniformly random coordinates.
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < store.count(); ++i) {
    if (store.item(i).value.size() == 1 && seen.insert({i, 0}).second)
      coords.push_back({i, 0});
  }
  const std::size_t total = store.scalar_count();
  while (coords.size() < probe_count && coords.size() < total) {
    const std::size_t pi = static_cast<std::size_t>(rng.below(store.count()));
    const std::size_t ei = static_cast<std::size_t>(rng.below(store.item(pi).value.size()));
    if (seen.insert({pi, ei}).second) coords.push_back({pi, ei});
  }

  for (const auto& [pi, ei] : coords) {
    double& slot = store.item(pi).value[ei];
    const double saved = slot;
    const double a = analytic[pi][ei];
    double best = std::numeric_limits<double>::infinity();
    for (double h : steps) {
      slot = saved + h;
      const double fp = eval(false);
      slot = saved - h;
      const double fm = eval(false);
      slot = saved;
      if (!std::isfinite(fp) || !std::isfinite(fm))
        throw std::runtime_error("grad_check: non-finite loss at probe");
      const double fd = (fp - fm) / (2.0 * h);
      const double denom = std::max(std::abs(a), std::abs(fd));
      const double rel =
          denom < floor ? std::abs(a - fd) / floor : std::abs(a - fd) / denom;
      best = std::min(best, rel);
    }
    rep.probed += 1;
    if (best > rep.max_rel_err) {
      rep.max_rel_err = best;
      rep.worst_coordinate = store.item(pi).name + "[" + std::to_string(ei) + "]";
    }
  }
  return rep;
}

}  // namespace ernn

#endif  // ERNN_GRADCHECK_H_
