// ernn/kernels.h

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

#ifndef ERNN_KERNELS_H_
#define ERNN_KERNELS_H_

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

// Dense inner loops behind everything (affine layers, their backward passes,
// overlap-add). Each kernel exists twice: a serial *_ref reference and an
// OpenMP front door. Both produce bit-identical results for any thread count:
// every output element is owned by one thread and computed by the same serial
// inner loop, so parallelism never reassociates a floating-point sum.

namespace ernn::kernels {

int num_threads();
void set_num_threads(int n);

namespace detail {
// OpenMP dispatch is worth it only for enough rows of work.
inline constexpr std::size_t kParallelRowCutoff = 64;

inline bool use_parallel(std::size_t rows) {
#ifdef _OPENMP
  return num_threads() > 1 && rows >= kParallelRowCutoff;
#else
  (void)rows;
  return false;
#endif
}
}  // namespace detail

// y = W x + b, W is m x n row-major. b may be null.
template <class T>
void gemv_ref(const T* w, const T* x, const T* b, T* y, std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* row = w + i * n;
    T acc = b ? b[i] : T(0);
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

template <class T>
void gemv(const T* w, const T* x, const T* b, T* y, std::size_t m, std::size_t n) {
  if (!detail::use_parallel(m)) {
    gemv_ref(w, x, b, y, m, n);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (long long ii = 0; ii < static_cast<long long>(m); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const T* row = w + i * n;
    T acc = b ? b[i] : T(0);
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
#endif
}

// y += W^T g, W is m x n row-major, g has length m, y has length n.
// Column-owned loop: deterministic under any schedule.
template <class T>
void gemv_transpose_acc_ref(const T* w, const T* g, T* y, std::size_t m, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    T acc = T(0);
    for (std::size_t i = 0; i < m; ++i) acc += w[i * n + j] * g[i];
    y[j] += acc;
  }
}

template <class T>
void gemv_transpose_acc(const T* w, const T* g, T* y, std::size_t m, std::size_t n) {
  if (!detail::use_parallel(n)) {
    gemv_transpose_acc_ref(w, g, y, m, n);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (long long jj = 0; jj < static_cast<long long>(n); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    T acc = T(0);
    for (std::size_t i = 0; i < m; ++i) acc += w[i * n + j] * g[i];
    y[j] += acc;
  }
#endif
}

// G += g x^T, G is m x n row-major.
template <class T>
void outer_acc_ref(const T* g, const T* x, T* grad_w, std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    T* row = grad_w + i * n;
    const T gi = g[i];
    for (std::size_t j = 0; j < n; ++j) row[j] += gi * x[j];
  }
}

template <class T>
void outer_acc(const T* g, const T* x, T* grad_w, std::size_t m, std::size_t n) {
  if (!detail::use_parallel(m)) {
    outer_acc_ref(g, x, grad_w, m, n);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (long long ii = 0; ii < static_cast<long long>(m); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    T* row = grad_w + i * n;
    const T gi = g[i];
    for (std::size_t j = 0; j < n; ++j) row[j] += gi * x[j];
  }
#endif
}

template <class T>
T dot(const T* a, const T* b, std::size_t n) {
  T acc = T(0);
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

// y += alpha * x
template <class T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace ernn::kernels

#endif  // ERNN_KERNELS_H_
