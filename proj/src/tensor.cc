// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/tensor.h"

#include <algorithm>
#include <cmath>

#include "acrotag/errors.h"

namespace acrotag {

void Matrix::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

void AddScaled(std::span<double> dst, std::span<const double> src,
               double scale) {
  if (dst.size() != src.size()) throw ShapeError("AddScaled: size mismatch");
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
}

void ScaleInPlace(std::span<double> values, double scale) {
  for (double& v : values) v *= scale;
}

double SquaredNorm(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return sum;
}

bool AllFinite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

double LogSumExp(std::span<const double> values) {
  if (values.empty()) throw ShapeError("LogSumExp: empty input");
  const double top = *std::max_element(values.begin(), values.end());
  if (std::isinf(top)) return top;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum);
}

}  // namespace acrotag
