// src/kernels.cc

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

#include "ernn/kernels.h"

#include <atomic>

namespace ernn::kernels {

namespace {
// One thread by default: reproducibility first, opt in to parallelism.
std::atomic<int> g_threads{1};
}  // namespace

int num_threads() { return g_threads.load(std::memory_order_relaxed); }

void set_num_threads(int n) {
  if (n < 1) n = 1;
#ifdef _OPENMP
  const int hw = omp_get_num_procs();
  if (n > hw) n = hw;
#endif
  g_threads.store(n, std::memory_order_relaxed);
}

}  // namespace ernn::kernels
