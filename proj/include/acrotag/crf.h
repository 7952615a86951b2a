// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Linear-chain CRF over the five BIO tags. A path y_1..y_n scores
//
//   start[y_1] + sum_t e[t, y_t] + sum_t trans[y_{t-1}, y_t] + end[y_n]
//
// Transitions that would produce invalid BIO (and starting on an I- tag) hold
// the constant kMaskScore. They take part in the partition function like any
// other score, never receive gradient, and are excluded from decoding.

#ifndef ACROTAG_CRF_H_
#define ACROTAG_CRF_H_

#include <cstddef>
#include <span>
#include <vector>

#include "acrotag/bio.h"
#include "acrotag/tensor.h"

namespace acrotag {

inline constexpr double kMaskScore = -10000.0;

struct CrfParams {
  Matrix transitions;  // T x T, [from, to]
  Vector start;        // T
  Vector end;          // T

  // All learnable entries zero, masked entries at kMaskScore.
  static CrfParams Masked();
  // All entries zero, including masked ones. Used for gradient buffers.
  static CrfParams Zeros();

  bool operator==(const CrfParams&) const = default;
};

bool IsMaskedTransition(size_t from, size_t to);
bool IsMaskedStart(size_t tag);

// Rewrites masked entries to kMaskScore.
void ApplyMask(CrfParams& params);
// Sets masked entries to zero (for gradients).
void ZeroMasked(CrfParams& grads);

// Emissions are n x T.
double ScoreSequence(const CrfParams& params, const Matrix& emissions,
                     std::span<const size_t> tags);

double LogPartition(const CrfParams& params, const Matrix& emissions);

struct Marginals {
  Matrix unary;                  // n x T
  std::vector<Matrix> pairwise;  // n-1 matrices of T x T
};

Marginals PosteriorMarginals(const CrfParams& params, const Matrix& emissions);

// Negative log-likelihood of `gold`. Adds dL/de to `grad_emissions` (n x T)
// and dL/dparams to `grads`. Throws DataError if `gold` crosses a masked
// transition.
double NllAndGradient(const CrfParams& params, const Matrix& emissions,
                      std::span<const size_t> gold, Matrix& grad_emissions,
                      CrfParams& grads);

struct ViterbiResult {
  std::vector<size_t> tags;
  double score = 0.0;
};

// Best unmasked path. Ties go to the lower tag index at every backpointer and
// at the final position.
ViterbiResult Viterbi(const CrfParams& params, const Matrix& emissions);

}  // namespace acrotag

#endif  // ACROTAG_CRF_H_
