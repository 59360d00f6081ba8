// ernn/params.h

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

#ifndef ERNN_PARAMS_H_
#define ERNN_PARAMS_H_

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ernn/tensor.h"

namespace ernn {

template <Scalar T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;  // same shape, accumulated by backward passes
};

// Named trainable arrays in registration order. Registration order is the
// contract: it fixes initialization draws, optimizer slot alignment and the
// checkpoint manifest.
template <Scalar T>
class ParameterStore {
 public:
  Parameter<T>& add(const std::string& name, std::vector<std::size_t> shape) {
    if (index_.count(name))
      throw std::invalid_argument("parameter store: duplicate name " + name);
    auto p = std::make_unique<Parameter<T>>();
    p->name = name;
    p->value = Tensor<T>::zeros(shape);
    p->grad = Tensor<T>::zeros(shape);
    index_[name] = items_.size();
    items_.push_back(std::move(p));
    return *items_.back();
  }

  Parameter<T>& at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end())
      throw std::invalid_argument("parameter store: unknown name " + name);
    return *items_[it->second];
  }
  const Parameter<T>& at(const std::string& name) const {
    return const_cast<ParameterStore*>(this)->at(name);
  }
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  std::size_t count() const { return items_.size(); }
  Parameter<T>& item(std::size_t i) { return *items_[i]; }
  const Parameter<T>& item(std::size_t i) const { return *items_[i]; }

  std::size_t scalar_count() const {
    std::size_t n = 0;
    for (const auto& p : items_) n += p->value.size();
    return n;
  }

  void zero_grads() {
    for (auto& p : items_) p->grad.fill(T(0));
  }

 private:
  std::vector<std::unique_ptr<Parameter<T>>> items_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace ernn

#endif  // ERNN_PARAMS_H_
