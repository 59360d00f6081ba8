// ernn/optimizer.h

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

#ifndef ERNN_OPTIMIZER_H_
#define ERNN_OPTIMIZER_H_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ernn/params.h"
#include "ernn/tensor.h"

namespace ernn {

// Adam with bias correction. Moment slots are aligned with the store's
// registration order.
template <Scalar T>
struct AdamState {
  T lr = T(0.0001);
  T beta1 = T(0.9);
  T beta2 = T(0.999);
  T eps = T(1e-8);
  long step_count = 0;
  std::vector<Tensor<T>> m;
  std::vector<Tensor<T>> v;

  static AdamState init(const ParameterStore<T>& store, T lr = T(0.0001)) {
    AdamState s;
    s.lr = lr;
    s.m.reserve(store.count());
    s.v.reserve(store.count());
    for (std::size_t i = 0; i < store.count(); ++i) {
      s.m.push_back(Tensor<T>::zeros(store.item(i).value.shape));
      s.v.push_back(Tensor<T>::zeros(store.item(i).value.shape));
    }
    return s;
  }

  bool initialized_for(const ParameterStore<T>& store) const {
    if (m.size() != store.count() || v.size() != store.count()) return false;
    for (std::size_t i = 0; i < store.count(); ++i)
      if (m[i].shape != store.item(i).value.shape) return false;
    return true;
  }
};

// One update over all parameters; grads are consumed (cleared) here so a
// forgotten zero_grads cannot silently accumulate across steps.
template <Scalar T>
void adam_step(ParameterStore<T>& store, AdamState<T>& state) {
  if (!state.initialized_for(store))
    throw std::logic_error("adam_step: state not initialized for this store");
  state.step_count += 1;
  const T t = static_cast<T>(state.step_count);
  const T bc1 = T(1) - std::pow(state.beta1, t);
  const T bc2 = T(1) - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < store.count(); ++i) {
    Parameter<T>& p = store.item(i);
    Tensor<T>& m = state.m[i];
    Tensor<T>& v = state.v[i];
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const T g = p.grad[j];
      m[j] = state.beta1 * m[j] + (T(1) - state.beta1) * g;
      v[j] = state.beta2 * v[j] + (T(1) - state.beta2) * g * g;
      const T mhat = m[j] / bc1;
      const T vhat = v[j] / bc2;
      p.value[j] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
    p.grad.fill(T(0));
  }
}

}  // namespace ernn

#endif  // ERNN_OPTIMIZER_H_
