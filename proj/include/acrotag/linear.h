// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#ifndef ACROTAG_LINEAR_H_
#define ACROTAG_LINEAR_H_

#include <cstddef>
#include <span>

#include "acrotag/random.h"
#include "acrotag/tensor.h"

namespace acrotag {

// y = W x + b
struct LinearParams {
  Matrix weight;  // out x in
  Vector bias;    // out

  static LinearParams Zeros(size_t in, size_t out);
  static LinearParams Random(size_t in, size_t out, SplitMix64& rng);

  size_t in_dim() const { return weight.cols(); }
  size_t out_dim() const { return weight.rows(); }

  bool operator==(const LinearParams&) const = default;
};

Vector LinearForward(const LinearParams& params, std::span<const double> x);

// Applies the layer to every row of `inputs`.
Matrix LinearForward(const LinearParams& params, const Matrix& inputs);

// Gradient of a single application: adds parameter gradients into `grads`
// and returns dL/dx.
Vector LinearBackward(const LinearParams& params, std::span<const double> x,
                      std::span<const double> grad_out, LinearParams& grads);

// Row-wise version of the above.
Matrix LinearBackward(const LinearParams& params, const Matrix& inputs,
                      const Matrix& grad_out, LinearParams& grads);

}  // namespace acrotag

#endif  // ACROTAG_LINEAR_H_
