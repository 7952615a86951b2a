// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#ifndef ACROTAG_TENSOR_H_
#define ACROTAG_TENSOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace acrotag {

using Vector = std::vector<double>;

// Dense row-major matrix of 64-bit floats.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  void Fill(double value);

  bool operator==(const Matrix& other) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

// dst += scale * src. Sizes must match.
void AddScaled(std::span<double> dst, std::span<const double> src,
               double scale = 1.0);

void ScaleInPlace(std::span<double> values, double scale);

double SquaredNorm(std::span<const double> values);

bool AllFinite(std::span<const double> values);

// Numerically stable log(sum(exp(v))). v must be non-empty.
double LogSumExp(std::span<const double> values);

}  // namespace acrotag

#endif  // ACROTAG_TENSOR_H_
