// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/kernels.h"

#include <omp.h>

#include "acrotag/errors.h"

namespace acrotag {
namespace kernels {
namespace {

int default_threads = 0;

void CheckGemv(const Matrix& a, size_t x_size, size_t y_size) {
  if (a.cols() != x_size || a.rows() != y_size) {
    throw ShapeError("Gemv: matrix does not match vector sizes");
  }
}

}  // namespace

void Gemv(const Matrix& a, std::span<const double> x, std::span<double> y) {
  CheckGemv(a, x.size(), y.size());
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.rows());
  const size_t cols = a.cols();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const double* row = a.values().data() + r * cols;
    double sum = 0.0;
    for (size_t c = 0; c < cols; ++c) sum += row[c] * x[c];
    y[r] += sum;
  }
}

void GemvTransposed(const Matrix& a, std::span<const double> x,
                    std::span<double> y) {
  CheckGemv(a, y.size(), x.size());
  const size_t rows = a.rows();
  const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(a.cols());
  const double* data = a.values().data();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelThreshold)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    double sum = 0.0;
    for (size_t r = 0; r < rows; ++r) sum += data[r * cols + c] * x[r];
    y[c] += sum;
  }
}

void AddOuter(std::span<const double> u, std::span<const double> v,
              Matrix& a) {
  if (a.rows() != u.size() || a.cols() != v.size()) {
    throw ShapeError("AddOuter: matrix does not match vector sizes");
  }
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.rows());
  const size_t cols = a.cols();
  double* data = a.values().data();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const double scale = u[r];
    if (scale == 0.0) continue;
    double* row = data + r * cols;
    for (size_t c = 0; c < cols; ++c) row[c] += scale * v[c];
  }
}

void SetThreadCount(int threads) {
  if (default_threads == 0) default_threads = omp_get_max_threads();
  omp_set_num_threads(threads > 0 ? threads : default_threads);
}

int ThreadCount() { return omp_get_max_threads(); }

}  // namespace kernels
}  // namespace acrotag
