// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/linear.h"

#include <cmath>

#include <fmt/format.h>

#include "acrotag/errors.h"
#include "acrotag/kernels.h"

namespace acrotag {
namespace {

void CheckInput(const LinearParams& p, size_t in) {
  if (p.weight.cols() != in || p.bias.size() != p.weight.rows()) {
    throw ShapeError(fmt::format("Linear: input of size {} for a {}x{} layer",
                                 in, p.weight.rows(), p.weight.cols()));
  }
}

}  // namespace

LinearParams LinearParams::Zeros(size_t in, size_t out) {
  return {Matrix(out, in), Vector(out, 0.0)};
}

LinearParams LinearParams::Random(size_t in, size_t out, SplitMix64& rng) {
  LinearParams p = Zeros(in, out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  for (double& v : p.weight.values()) v = rng.Uniform(-scale, scale);
  for (double& v : p.bias) v = rng.Uniform(-scale, scale);
  return p;
}

Vector LinearForward(const LinearParams& params, std::span<const double> x) {
  CheckInput(params, x.size());
  Vector y = params.bias;
  kernels::Gemv(params.weight, x, y);
  return y;
}

Matrix LinearForward(const LinearParams& params, const Matrix& inputs) {
  CheckInput(params, inputs.cols());
  Matrix out(inputs.rows(), params.out_dim());
  for (size_t r = 0; r < inputs.rows(); ++r) {
    std::span<double> y = out.row(r);
    std::copy(params.bias.begin(), params.bias.end(), y.begin());
    kernels::Gemv(params.weight, inputs.row(r), y);
  }
  return out;
}

Vector LinearBackward(const LinearParams& params, std::span<const double> x,
                      std::span<const double> grad_out, LinearParams& grads) {
  CheckInput(params, x.size());
  if (grad_out.size() != params.out_dim()) {
    throw ShapeError("LinearBackward: gradient size does not match output");
  }
  kernels::AddOuter(grad_out, x, grads.weight);
  AddScaled(grads.bias, grad_out);
  Vector grad_x(x.size(), 0.0);
  kernels::GemvTransposed(params.weight, grad_out, grad_x);
  return grad_x;
}

Matrix LinearBackward(const LinearParams& params, const Matrix& inputs,
                      const Matrix& grad_out, LinearParams& grads) {
  if (inputs.rows() != grad_out.rows()) {
    throw ShapeError("LinearBackward: row count mismatch");
  }
  Matrix grad_inputs(inputs.rows(), inputs.cols());
  for (size_t r = 0; r < inputs.rows(); ++r) {
    const Vector g = LinearBackward(params, inputs.row(r), grad_out.row(r), grads);
    std::copy(g.begin(), g.end(), grad_inputs.row(r).begin());
  }
  return grad_inputs;
}

}  // namespace acrotag
