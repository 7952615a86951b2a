// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/errors.h"
#include "acrotag/kernels.h"

namespace acrotag {
namespace kernels {
namespace reference {

void Gemv(const Matrix& a, std::span<const double> x, std::span<double> y) {
  if (a.cols() != x.size() || a.rows() != y.size()) {
    throw ShapeError("Gemv: matrix does not match vector sizes");
  }
  for (size_t r = 0; r < a.rows(); ++r) {
    double sum = 0.0;
    for (size_t c = 0; c < a.cols(); ++c) sum += a(r, c) * x[c];
    y[r] += sum;
  }
}

void GemvTransposed(const Matrix& a, std::span<const double> x,
                    std::span<double> y) {
  if (a.rows() != x.size() || a.cols() != y.size()) {
    throw ShapeError("GemvTransposed: matrix does not match vector sizes");
  }
  for (size_t c = 0; c < a.cols(); ++c) {
    double sum = 0.0;
    for (size_t r = 0; r < a.rows(); ++r) sum += a(r, c) * x[r];
    y[c] += sum;
  }
}

void AddOuter(std::span<const double> u, std::span<const double> v,
              Matrix& a) {
  if (a.rows() != u.size() || a.cols() != v.size()) {
    throw ShapeError("AddOuter: matrix does not match vector sizes");
  }
  for (size_t r = 0; r < a.rows(); ++r) {
    if (u[r] == 0.0) continue;
    for (size_t c = 0; c < a.cols(); ++c) a(r, c) += u[r] * v[c];
  }
}

}  // namespace reference
}  // namespace kernels
}  // namespace acrotag
