// ernn/tensor.h

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

#ifndef ERNN_TENSOR_H_
#define ERNN_TENSOR_H_

#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ernn {

template <class T>
concept Scalar = std::is_same_v<T, float> || std::is_same_v<T, double>;

// Dense row-major array of reals. Everything in this project is 1-D or 2-D.
template <Scalar T>
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s)
      : shape(std::move(s)), data(extent_product(shape), T(0)) {}

  static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

  static Tensor scalar(T v) {
    Tensor t({1});
    t.data[0] = v;
    return t;
  }

  static Tensor from(std::vector<T> values) {
    Tensor t;
    t.shape = {values.size()};
    t.data = std::move(values);
    return t;
  }

  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<T> values) {
    if (values.size() != rows * cols)
      throw std::invalid_argument("tensor: matrix data does not match extents");
    Tensor t;
    t.shape = {rows, cols};
    t.data = std::move(values);
    return t;
  }

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  T& operator[](std::size_t i) { return data[i]; }
  const T& operator[](std::size_t i) const { return data[i]; }
  T& at2(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  const T& at2(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }

  bool all_finite() const {
    for (T v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  static std::size_t extent_product(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (std::size_t e : s) {
      if (e == 0) throw std::invalid_argument("tensor: zero extent");
      n *= e;
    }
    return s.empty() ? 0 : n;
  }
};

inline std::string shape_string(const std::vector<std::size_t>& s) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "x" : "") << s[i];
  os << ")";
  return os.str();
}

// Shape mismatches are contract violations; the message names both shapes.
inline void check_same_shape(const std::vector<std::size_t>& a,
                             const std::vector<std::size_t>& b,
                             const char* where) {
  if (a != b)
    throw std::invalid_argument(std::string(where) + ": shape mismatch " +
                                shape_string(a) + " vs " + shape_string(b));
}

}  // namespace ernn

#endif  // ERNN_TENSOR_H_
