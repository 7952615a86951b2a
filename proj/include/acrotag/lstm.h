// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// LSTM and bidirectional LSTM with explicit forward tapes and
// backpropagation through time. Gate blocks are stacked in the order
// [input, forget, cell, output]:
//
//   z  = W x + U h + b
//   i  = sigmoid(z_i)   f = sigmoid(z_f)   g = tanh(z_g)   o = sigmoid(z_o)
//   c' = f * c + i * g
//   h' = o * tanh(c')

#ifndef ACROTAG_LSTM_H_
#define ACROTAG_LSTM_H_

#include <cstddef>
#include <span>

#include "acrotag/random.h"
#include "acrotag/tensor.h"

namespace acrotag {

struct LstmParams {
  size_t input_dim = 0;
  size_t hidden_dim = 0;
  Matrix w;  // 4H x D
  Matrix u;  // 4H x H
  Vector b;  // 4H

  static LstmParams Zeros(size_t input_dim, size_t hidden_dim);

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, forget-gate bias 1.
  static LstmParams Random(size_t input_dim, size_t hidden_dim,
                           SplitMix64& rng);

  bool operator==(const LstmParams&) const = default;
};

struct LstmState {
  Vector h;
  Vector c;
};

// One recurrence step. Throws ShapeError on dimension mismatch.
LstmState LstmStep(const LstmParams& params, std::span<const double> x,
                   std::span<const double> h, std::span<const double> c);

// Intermediates of one direction over a sequence, indexed by position in the
// input (not by processing order).
struct LstmTape {
  bool reversed = false;
  Matrix inputs;     // n x D
  Matrix gates;      // n x 4H, activated
  Matrix cells;      // n x H
  Matrix cell_tanh;  // n x H
  Matrix hidden;     // n x H

  size_t length() const { return inputs.rows(); }
};

// Runs one direction from a zero state. `reversed` processes right to left.
LstmTape LstmForward(const LstmParams& params, const Matrix& inputs,
                     bool reversed);

// Backpropagates `grad_hidden` (n x H) through the tape. Parameter gradients
// are added to `grads`; the input gradient (n x D) is returned.
Matrix LstmBackward(const LstmParams& params, const LstmTape& tape,
                    const Matrix& grad_hidden, LstmParams& grads);

struct BiLstmParams {
  LstmParams forward;
  LstmParams backward;

  static BiLstmParams Zeros(size_t input_dim, size_t hidden_dim);
  static BiLstmParams Random(size_t input_dim, size_t hidden_dim,
                             SplitMix64& rng);

  size_t input_dim() const { return forward.input_dim; }
  size_t hidden_dim() const { return forward.hidden_dim; }

  bool operator==(const BiLstmParams&) const = default;
};

struct BiLstmTape {
  LstmTape forward;
  LstmTape backward;
  Matrix output;  // n x 2H, [forward h_t ; backward h_t]

  bool empty() const { return output.empty(); }
};

// Throws ShapeError for an empty sequence.
BiLstmTape BiLstmForward(const BiLstmParams& params, const Matrix& inputs);

// Throws Error if the tape holds no forward pass.
Matrix BiLstmBackward(const BiLstmParams& params, const BiLstmTape& tape,
                      const Matrix& grad_output, BiLstmParams& grads);

}  // namespace acrotag

#endif  // ACROTAG_LSTM_H_
