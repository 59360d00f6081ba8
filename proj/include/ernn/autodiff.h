// ernn/autodiff.h

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

#ifndef ERNN_AUTODIFF_H_
#define ERNN_AUTODIFF_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "ernn/kernels.h"
#include "ernn/params.h"
#include "ernn/tensor.h"

namespace ernn::ad {

struct ValueId {
  std::int32_t idx = -1;
  bool valid() const { return idx >= 0; }
};

enum class Act { relu, sigmoid, tanh };

// Reverse-mode tape. Nodes are recorded in construction order, which is a
// topological order, so backward is a single reverse sweep. Values are
// immutable once recorded. Node grads are scratch: each backward() pass
// recomputes them from a fresh seed; persistent accumulation happens in the
// bound ParameterStore via add_param_grads_to_store().
template <Scalar T>
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // --- node creation -------------------------------------------------------

  ValueId constant(Tensor<T> v) { return push(std::move(v), {}, nullptr); }

  // Tracked input that is not a trainable parameter (e.g. a probed state).
  ValueId leaf(Tensor<T> v) { return push(std::move(v), {}, nullptr); }

  // Tracked parameter; its node grad is exported to p.grad on request.
  ValueId param(Parameter<T>& p) {
    ValueId id = push(p.value, {}, nullptr);
    bound_.push_back({id, &p});
    return id;
  }

  ValueId matvec(ValueId w, ValueId x) {
    const Tensor<T>& wv = value(w);
    const Tensor<T>& xv = value(x);
    if (wv.rank() != 2 || wv.cols() != xv.size())
      throw std::invalid_argument("matvec: shape mismatch " + shape_string(wv.shape) +
                                  " vs " + shape_string(xv.shape));
    Tensor<T> y({wv.rows()});
    kernels::gemv(wv.data.data(), xv.data.data(), static_cast<const T*>(nullptr), y.data.data(), wv.rows(), wv.cols());
    return push(std::move(y), {w, x}, [this](Node& nd) {
      const Tensor<T>& g = nd.grad;
      const Tensor<T>& wv2 = value(nd.parents[0]);
      const Tensor<T>& xv2 = value(nd.parents[1]);
      kernels::outer_acc(g.data.data(), xv2.data.data(), grad(nd.parents[0]).data.data(),
                         wv2.rows(), wv2.cols());
      kernels::gemv_transpose_acc(wv2.data.data(), g.data.data(),
                                  grad(nd.parents[1]).data.data(), wv2.rows(), wv2.cols());
    });
  }

  // y = W x + b
  ValueId affine(ValueId x, ValueId w, ValueId b) {
    const Tensor<T>& wv = value(w);
    const Tensor<T>& xv = value(x);
    const Tensor<T>& bv = value(b);
    if (wv.rank() != 2 || wv.cols() != xv.size() || wv.rows() != bv.size())
      throw std::invalid_argument("affine: shape mismatch W" + shape_string(wv.shape) +
                                  " x" + shape_string(xv.shape) + " b" + shape_string(bv.shape));
    Tensor<T> y({wv.rows()});
    kernels::gemv(wv.data.data(), xv.data.data(), bv.data.data(), y.data.data(),
                  wv.rows(), wv.cols());
    return push(std::move(y), {x, w, b}, [this](Node& nd) {
      const Tensor<T>& g = nd.grad;
      const Tensor<T>& wv2 = value(nd.parents[1]);
      const Tensor<T>& xv2 = value(nd.parents[0]);
      kernels::gemv_transpose_acc(wv2.data.data(), g.data.data(),
                                  grad(nd.parents[0]).data.data(), wv2.rows(), wv2.cols());
      kernels::outer_acc(g.data.data(), xv2.data.data(), grad(nd.parents[1]).data.data(),
                         wv2.rows(), wv2.cols());
      Tensor<T>& gb = grad(nd.parents[2]);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
    });
  }

  ValueId add(ValueId a, ValueId b) {
    const Tensor<T>& av = value(a);
    const Tensor<T>& bv = value(b);
    check_same_shape(av.shape, bv.shape, "add");
    Tensor<T> y = av;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += bv[i];
    return push(std::move(y), {a, b}, [this](Node& nd) {
      const Tensor<T>& g = nd.grad;
      Tensor<T>& ga = grad(nd.parents[0]);
      Tensor<T>& gb = grad(nd.parents[1]);
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i];
        gb[i] += g[i];
      }
    });
  }

  ValueId sub(ValueId a, ValueId b) {
    const Tensor<T>& av = value(a);
    const Tensor<T>& bv = value(b);
    check_same_shape(av.shape, bv.shape, "sub");
    Tensor<T> y = av;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= bv[i];
    return push(std::move(y), {a, b}, [this](Node& nd) {
      const Tensor<T>& g = nd.grad;
      Tensor<T>& ga = grad(nd.parents[0]);
      Tensor<T>& gb = grad(nd.parents[1]);
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i];
        gb[i] -= g[i];
      }
    });
  }

  ValueId mul(ValueId a, ValueId b) {
    const Tensor<T>& av = value(a);
    const Tensor<T>& bv = value(b);
    check_same_shape(av.shape, bv.shape, "mul");
    Tensor<T> y = av;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= bv[i];
    return push(std::move(y), {a, b}, [this](Node& nd) {
      const Tensor<T>& g = nd.grad;
      const Tensor<T>& av2 = value(nd.parents[0]);
      const Tensor<T>& bv2 = value(nd.parents[1]);
      Tensor<T>& ga = grad(nd.parents[0]);
      Tensor<T>& gb = grad(nd.parents[1]);
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i] * bv2[i];
        gb[i] += g[i] * av2[i];
      }
    });
  }

  // y = s * x where s is a single trainable scalar (the ERNN step sizes).
  ValueId scale(ValueId s, ValueId x) {
    const Tensor<T>& sv = value(s);
    if (sv.size() != 1) throw std::invalid_argument("scale: scalar expected");
    const Tensor<T>& xv = value(x);
    Tensor<T> y = xv;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= sv[0];
    return push(std::move(y), {s, x}, [this](Node& nd) {
      const Tensor<T>& g = nd.grad;
      const Tensor<T>& sv2 = value(nd.parents[0]);
      const Tensor<T>& xv2 = value(nd.parents[1]);
      grad(nd.parents[0])[0] += kernels::dot(g.data.data(), xv2.data.data(), g.size());
      Tensor<T>& gx = grad(nd.parents[1]);
      kernels::axpy(sv2[0], g.data.data(), gx.data.data(), g.size());
    });
  }

  ValueId relu(ValueId x) {
    Tensor<T> y = value(x);
    for (auto& v : y.data) v = v > T(0) ? v : T(0);
    return push(std::move(y), {x}, [this](Node& nd) {
      const Tensor<T>& g = nd.grad;
      const Tensor<T>& xv = value(nd.parents[0]);
      Tensor<T>& gx = grad(nd.parents[0]);
      for (std::size_t i = 0; i < g.size(); ++i)
        if (xv[i] > T(0)) gx[i] += g[i];
    });
  }

  ValueId sigmoid(ValueId x) {
    Tensor<T> y = value(x);
    for (auto& v : y.data) v = T(1) / (T(1) + std::exp(-v));
    return push(std::move(y), {x}, [this](Node& nd) {
      const Tensor<T>& g = nd.grad;
      const Tensor<T>& yv = nd.value;
      Tensor<T>& gx = grad(nd.parents[0]);
      for (std::size_t i = 0; i < g.size(); ++i)
        gx[i] += g[i] * yv[i] * (T(1) - yv[i]);
    });
  }

  ValueId tanh_(ValueId x) {
    Tensor<T> y = value(x);
    for (auto& v : y.data) v = std::tanh(v);
    return push(std::move(y), {x}, [this](Node& nd) {
      const Tensor<T>& g = nd.grad;
      const Tensor<T>& yv = nd.value;
      Tensor<T>& gx = grad(nd.parents[0]);
      for (std::size_t i = 0; i < g.size(); ++i)
        gx[i] += g[i] * (T(1) - yv[i] * yv[i]);
    });
  }

  ValueId activation(ValueId x, Act kind) {
    switch (kind) {
      case Act::relu: return relu(x);
      case Act::sigmoid: return sigmoid(x);
      case Act::tanh: return tanh_(x);
    }
    throw std::invalid_argument("activation: invalid kind");
  }

  ValueId sum(ValueId x) {
    const Tensor<T>& xv = value(x);
    T acc = T(0);
    for (T v : xv.data) acc += v;
    return push(Tensor<T>::scalar(acc), {x}, [this](Node& nd) {
      const T g0 = nd.grad[0];
      Tensor<T>& gx = grad(nd.parents[0]);
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g0;
    });
  }

  // (1/n) * sum_i |a_i - target_i|; sign(0) treated as 0.
  ValueId mean_abs_diff(ValueId a, Tensor<T> target) {
    const Tensor<T>& av = value(a);
    check_same_shape(av.shape, target.shape, "mean_abs_diff");
    const std::size_t n = av.size();
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i) acc += std::abs(av[i] - target[i]);
    acc /= static_cast<T>(n);
    auto tgt = std::make_shared<Tensor<T>>(std::move(target));
    return push(Tensor<T>::scalar(acc), {a}, [this, tgt](Node& nd) {
      const T g0 = nd.grad[0];
      const Tensor<T>& av2 = value(nd.parents[0]);
      Tensor<T>& ga = grad(nd.parents[0]);
      const std::size_t n2 = av2.size();
      const T w = g0 / static_cast<T>(n2);
      for (std::size_t i = 0; i < n2; ++i) {
        const T d = av2[i] - (*tgt)[i];
        if (d > T(0))
          ga[i] += w;
        else if (d < T(0))
          ga[i] -= w;
      }
    });
  }

  // Escape hatch for ops with hand-derived backward (masked inverse STFT).
  // The closure receives this node and must accumulate into parent grads.
  ValueId custom(std::vector<ValueId> parents, Tensor<T> value,
                 std::function<void(Tape&, const Tensor<T>& upstream)> backward) {
    auto fn = [this, backward = std::move(backward)](Node& nd) {
      backward(*this, nd.grad);
    };
    return push(std::move(value), std::move(parents), std::move(fn));
  }

  // --- access ---------------------------------------------------------------

  const Tensor<T>& value(ValueId id) const { return nodes_[check(id)].value; }
  Tensor<T>& grad(ValueId id) { return nodes_[check(id)].grad; }
  std::size_t node_count() const { return nodes_.size(); }

  // --- backward -------------------------------------------------------------

  // Reverse sweep from a scalar node, seed dLoss/dLoss = seed_scale.
  void backward(ValueId loss, T seed_scale = T(1)) {
    if (value(loss).size() != 1)
      throw std::invalid_argument("backward: loss must be a scalar node");
    Tensor<T> seed = Tensor<T>::scalar(seed_scale);
    backward_seeded(loss, seed.data);
  }

  // Reverse sweep with an arbitrary cotangent on any node (Jacobian probes).
  void backward_seeded(ValueId from, std::span<const T> seed) {
    Node& top = nodes_[check(from)];
    if (seed.size() != top.value.size())
      throw std::invalid_argument("backward_seeded: seed size mismatch");
    for (auto& nd : nodes_) nd.grad.fill(T(0));
    for (std::size_t i = 0; i < seed.size(); ++i) top.grad[i] = seed[i];
    for (std::int32_t i = from.idx; i >= 0; --i) {
      Node& nd = nodes_[static_cast<std::size_t>(i)];
      if (nd.backward) nd.backward(nd);
    }
  }

  // Persistent accumulation point: Parameter.grad += scale * node grad.
  void add_param_grads_to_store(T scale = T(1)) {
    for (const auto& bp : bound_) {
      const Tensor<T>& g = nodes_[static_cast<std::size_t>(bp.id.idx)].grad;
      Tensor<T>& pg = bp.target->grad;
      for (std::size_t i = 0; i < g.size(); ++i) pg[i] += scale * g[i];
    }
  }

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;
    std::vector<ValueId> parents;
    std::function<void(Node&)> backward;
  };

  struct BoundParam {
    ValueId id;
    Parameter<T>* target;
  };

  std::size_t check(ValueId id) const {
    if (!id.valid() || static_cast<std::size_t>(id.idx) >= nodes_.size())
      throw std::invalid_argument("tape: invalid node id");
    return static_cast<std::size_t>(id.idx);
  }

  ValueId push(Tensor<T> v, std::vector<ValueId> parents, std::function<void(Node&)> fn) {
    if (!v.all_finite())
      throw std::runtime_error("tape: non-finite value recorded");
    Node nd;
    nd.grad = Tensor<T>::zeros(v.shape);
    nd.value = std::move(v);
    nd.parents = std::move(parents);
    nd.backward = std::move(fn);
    nodes_.push_back(std::move(nd));
    return ValueId{static_cast<std::int32_t>(nodes_.size() - 1)};
  }

  std::vector<Node> nodes_;
  std::vector<BoundParam> bound_;
};

}  // namespace ernn::ad

#endif  // ERNN_AUTODIFF_H_
