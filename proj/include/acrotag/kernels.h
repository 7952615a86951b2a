// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Dense kernels used by the recurrent layers. The functions in namespace
// kernels are OpenMP-parallel over output rows; kernels::reference holds the
// plain serial versions the tests and the benchmark compare against. Both
// perform the same floating point operations in the same order for every
// output element, so their results are bit-identical.

#ifndef ACROTAG_KERNELS_H_
#define ACROTAG_KERNELS_H_

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>

#include "acrotag/tensor.h"

namespace acrotag {
namespace kernels {

// Below this many multiply-adds the parallel kernels run on one thread.
inline constexpr size_t kParallelThreshold = 1 << 14;

// y += A x
void Gemv(const Matrix& a, std::span<const double> x, std::span<double> y);

// y += A^T x
void GemvTransposed(const Matrix& a, std::span<const double> x,
                    std::span<double> y);

// A += u v^T
void AddOuter(std::span<const double> u, std::span<const double> v,
              Matrix& a);

// Number of threads used by parallel regions. 0 restores the runtime default.
void SetThreadCount(int threads);
int ThreadCount();

namespace reference {

void Gemv(const Matrix& a, std::span<const double> x, std::span<double> y);
void GemvTransposed(const Matrix& a, std::span<const double> x,
                    std::span<double> y);
void AddOuter(std::span<const double> u, std::span<const double> v,
              Matrix& a);

}  // namespace reference

// Runs body(i) for i in [0, n), in parallel when `parallel` is set. The
// exception thrown for the lowest index, if any, is rethrown after the loop.
template <typename Body>
void ParallelFor(size_t n, bool parallel, Body&& body) {
  std::exception_ptr error;
  size_t error_index = n;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic, 1) if (parallel && n > 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (static_cast<size_t>(i) < error_index) {
        error_index = static_cast<size_t>(i);
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace kernels
}  // namespace acrotag

#endif  // ACROTAG_KERNELS_H_
