// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/lstm.h"

#include <cmath>

#include <fmt/format.h>

#include "acrotag/errors.h"
#include "acrotag/kernels.h"

namespace acrotag {
namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void FillUniform(std::span<double> values, double scale, SplitMix64& rng) {
  for (double& v : values) v = rng.Uniform(-scale, scale);
}

// Computes activated gates [i, f, g, o] into `gates`.
void ComputeGates(const LstmParams& p, std::span<const double> x,
                  std::span<const double> h, std::span<double> gates) {
  const size_t hd = p.hidden_dim;
  std::copy(p.b.begin(), p.b.end(), gates.begin());
  kernels::Gemv(p.w, x, gates);
  kernels::Gemv(p.u, h, gates);
  for (size_t k = 0; k < hd; ++k) {
    gates[k] = Sigmoid(gates[k]);
    gates[hd + k] = Sigmoid(gates[hd + k]);
    gates[2 * hd + k] = std::tanh(gates[2 * hd + k]);
    gates[3 * hd + k] = Sigmoid(gates[3 * hd + k]);
  }
}

void CheckParams(const LstmParams& p) {
  const size_t g = 4 * p.hidden_dim;
  if (p.w.rows() != g || p.w.cols() != p.input_dim || p.u.rows() != g ||
      p.u.cols() != p.hidden_dim || p.b.size() != g) {
    throw ShapeError("LstmParams: inconsistent shapes");
  }
}

}  // namespace

LstmParams LstmParams::Zeros(size_t input_dim, size_t hidden_dim) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.w = Matrix(4 * hidden_dim, input_dim);
  p.u = Matrix(4 * hidden_dim, hidden_dim);
  p.b.assign(4 * hidden_dim, 0.0);
  return p;
}

LstmParams LstmParams::Random(size_t input_dim, size_t hidden_dim,
                              SplitMix64& rng) {
  LstmParams p = Zeros(input_dim, hidden_dim);
  FillUniform(p.w.values(), 1.0 / std::sqrt(static_cast<double>(input_dim)),
              rng);
  const double recurrent = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  FillUniform(p.u.values(), recurrent, rng);
  FillUniform(p.b, recurrent, rng);
  for (size_t k = hidden_dim; k < 2 * hidden_dim; ++k) p.b[k] = 1.0;
  return p;
}

LstmState LstmStep(const LstmParams& params, std::span<const double> x,
                   std::span<const double> h, std::span<const double> c) {
  CheckParams(params);
  const size_t hd = params.hidden_dim;
  if (x.size() != params.input_dim || h.size() != hd || c.size() != hd) {
    throw ShapeError(fmt::format(
        "LstmStep: got x={}, h={}, c={} for D={}, H={}", x.size(), h.size(),
        c.size(), params.input_dim, hd));
  }
  Vector gates(4 * hd);
  ComputeGates(params, x, h, gates);
  LstmState next{Vector(hd), Vector(hd)};
  for (size_t k = 0; k < hd; ++k) {
    next.c[k] = gates[hd + k] * c[k] + gates[k] * gates[2 * hd + k];
    next.h[k] = gates[3 * hd + k] * std::tanh(next.c[k]);
  }
  return next;
}

LstmTape LstmForward(const LstmParams& params, const Matrix& inputs,
                     bool reversed) {
  CheckParams(params);
  if (inputs.cols() != params.input_dim) {
    throw ShapeError(fmt::format("LstmForward: input dim {} != {}",
                                 inputs.cols(), params.input_dim));
  }
  const size_t n = inputs.rows();
  const size_t hd = params.hidden_dim;
  LstmTape tape;
  tape.reversed = reversed;
  tape.inputs = inputs;
  tape.gates = Matrix(n, 4 * hd);
  tape.cells = Matrix(n, hd);
  tape.cell_tanh = Matrix(n, hd);
  tape.hidden = Matrix(n, hd);
  const Vector zero(hd, 0.0);
  for (size_t step = 0; step < n; ++step) {
    const size_t t = reversed ? n - 1 - step : step;
    const bool first = step == 0;
    const size_t prev = reversed ? t + 1 : t - 1;
    std::span<const double> h_prev = first ? std::span<const double>(zero)
                                           : tape.hidden.row(prev);
    std::span<const double> c_prev = first ? std::span<const double>(zero)
                                           : tape.cells.row(prev);
    std::span<double> gates = tape.gates.row(t);
    ComputeGates(params, inputs.row(t), h_prev, gates);
    for (size_t k = 0; k < hd; ++k) {
      const double c = gates[hd + k] * c_prev[k] + gates[k] * gates[2 * hd + k];
      tape.cells(t, k) = c;
      tape.cell_tanh(t, k) = std::tanh(c);
      tape.hidden(t, k) = gates[3 * hd + k] * tape.cell_tanh(t, k);
    }
  }
  return tape;
}

Matrix LstmBackward(const LstmParams& params, const LstmTape& tape,
                    const Matrix& grad_hidden, LstmParams& grads) {
  CheckParams(params);
  CheckParams(grads);
  const size_t n = tape.length();
  const size_t hd = params.hidden_dim;
  if (grad_hidden.rows() != n || grad_hidden.cols() != hd) {
    throw ShapeError("LstmBackward: gradient shape does not match the tape");
  }
  Matrix grad_inputs(n, params.input_dim);
  const Vector zero(hd, 0.0);
  Vector dh_next(hd, 0.0);
  Vector dc_next(hd, 0.0);
  Vector dz(4 * hd);
  for (size_t step = 0; step < n; ++step) {
    // Walk positions in reverse processing order.
    const size_t t = tape.reversed ? step : n - 1 - step;
    const bool first = tape.reversed ? t == n - 1 : t == 0;
    const size_t prev = tape.reversed ? t + 1 : t - 1;
    std::span<const double> h_prev = first ? std::span<const double>(zero)
                                           : tape.hidden.row(prev);
    std::span<const double> c_prev = first ? std::span<const double>(zero)
                                           : tape.cells.row(prev);
    std::span<const double> gates = tape.gates.row(t);
    for (size_t k = 0; k < hd; ++k) {
      const double i = gates[k];
      const double f = gates[hd + k];
      const double g = gates[2 * hd + k];
      const double o = gates[3 * hd + k];
      const double tc = tape.cell_tanh(t, k);
      const double dh = grad_hidden(t, k) + dh_next[k];
      const double dc = dh * o * (1.0 - tc * tc) + dc_next[k];
      dz[k] = dc * g * i * (1.0 - i);
      dz[hd + k] = dc * c_prev[k] * f * (1.0 - f);
      dz[2 * hd + k] = dc * i * (1.0 - g * g);
      dz[3 * hd + k] = dh * tc * o * (1.0 - o);
      dc_next[k] = dc * f;
    }
    kernels::AddOuter(dz, tape.inputs.row(t), grads.w);
    kernels::AddOuter(dz, h_prev, grads.u);
    AddScaled(grads.b, dz);
    kernels::GemvTransposed(params.w, dz, grad_inputs.row(t));
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    kernels::GemvTransposed(params.u, dz, dh_next);
  }
  return grad_inputs;
}

BiLstmParams BiLstmParams::Zeros(size_t input_dim, size_t hidden_dim) {
  return {LstmParams::Zeros(input_dim, hidden_dim),
          LstmParams::Zeros(input_dim, hidden_dim)};
}

BiLstmParams BiLstmParams::Random(size_t input_dim, size_t hidden_dim,
                                  SplitMix64& rng) {
  BiLstmParams p;
  p.forward = LstmParams::Random(input_dim, hidden_dim, rng);
  p.backward = LstmParams::Random(input_dim, hidden_dim, rng);
  return p;
}

BiLstmTape BiLstmForward(const BiLstmParams& params, const Matrix& inputs) {
  if (inputs.rows() == 0) throw ShapeError("BiLstmForward: empty sequence");
  BiLstmTape tape;
  tape.forward = LstmForward(params.forward, inputs, /*reversed=*/false);
  tape.backward = LstmForward(params.backward, inputs, /*reversed=*/true);
  const size_t n = inputs.rows();
  const size_t hd = params.hidden_dim();
  tape.output = Matrix(n, 2 * hd);
  for (size_t t = 0; t < n; ++t) {
    std::span<double> out = tape.output.row(t);
    std::copy_n(tape.forward.hidden.row(t).begin(), hd, out.begin());
    std::copy_n(tape.backward.hidden.row(t).begin(), hd, out.begin() + hd);
  }
  return tape;
}

Matrix BiLstmBackward(const BiLstmParams& params, const BiLstmTape& tape,
                      const Matrix& grad_output, BiLstmParams& grads) {
  if (tape.empty()) throw Error("BiLstmBackward: no cached forward pass");
  const size_t n = tape.output.rows();
  const size_t hd = params.hidden_dim();
  if (grad_output.rows() != n || grad_output.cols() != 2 * hd) {
    throw ShapeError("BiLstmBackward: gradient shape does not match output");
  }
  Matrix grad_fwd(n, hd);
  Matrix grad_bwd(n, hd);
  for (size_t t = 0; t < n; ++t) {
    std::span<const double> g = grad_output.row(t);
    std::copy_n(g.begin(), hd, grad_fwd.row(t).begin());
    std::copy_n(g.begin() + hd, hd, grad_bwd.row(t).begin());
  }
  Matrix grad_inputs =
      LstmBackward(params.forward, tape.forward, grad_fwd, grads.forward);
  const Matrix from_backward =
      LstmBackward(params.backward, tape.backward, grad_bwd, grads.backward);
  AddScaled(grad_inputs.values(), from_backward.values());
  return grad_inputs;
}

}  // namespace acrotag
