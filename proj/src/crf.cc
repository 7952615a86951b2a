// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/crf.h"

#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "acrotag/errors.h"

namespace acrotag {
namespace {

constexpr size_t T = kNumTags;

void CheckEmissions(const CrfParams& params, const Matrix& emissions) {
  if (emissions.rows() == 0) throw ShapeError("CRF: empty sequence");
  if (emissions.cols() != T || params.transitions.rows() != T ||
      params.transitions.cols() != T || params.start.size() != T ||
      params.end.size() != T) {
    throw ShapeError(fmt::format("CRF: expected {} tags", T));
  }
}

// alpha[t][y]: log-sum of scores of all prefixes ending in y at t.
Matrix ForwardScores(const CrfParams& p, const Matrix& e) {
  const size_t n = e.rows();
  Matrix alpha(n, T);
  for (size_t y = 0; y < T; ++y) alpha(0, y) = p.start[y] + e(0, y);
  std::array<double, T> terms;
  for (size_t t = 1; t < n; ++t) {
    for (size_t y = 0; y < T; ++y) {
      for (size_t x = 0; x < T; ++x) {
        terms[x] = alpha(t - 1, x) + p.transitions(x, y);
      }
      alpha(t, y) = LogSumExp(terms) + e(t, y);
    }
  }
  return alpha;
}

// beta[t][y]: log-sum of scores of all suffixes after y at t, incl. end.
Matrix BackwardScores(const CrfParams& p, const Matrix& e) {
  const size_t n = e.rows();
  Matrix beta(n, T);
  for (size_t y = 0; y < T; ++y) beta(n - 1, y) = p.end[y];
  std::array<double, T> terms;
  for (size_t t = n - 1; t-- > 0;) {
    for (size_t x = 0; x < T; ++x) {
      for (size_t y = 0; y < T; ++y) {
        terms[y] = p.transitions(x, y) + e(t + 1, y) + beta(t + 1, y);
      }
      beta(t, x) = LogSumExp(terms);
    }
  }
  return beta;
}

double FinalLogSum(const CrfParams& p, const Matrix& alpha) {
  std::array<double, T> terms;
  const size_t last = alpha.rows() - 1;
  for (size_t y = 0; y < T; ++y) terms[y] = alpha(last, y) + p.end[y];
  return LogSumExp(terms);
}

}  // namespace

bool IsMaskedTransition(size_t from, size_t to) {
  return !IsAllowedTransition(static_cast<Tag>(from), static_cast<Tag>(to));
}

bool IsMaskedStart(size_t tag) { return !IsAllowedStart(static_cast<Tag>(tag)); }

void ApplyMask(CrfParams& params) {
  for (size_t a = 0; a < T; ++a) {
    if (IsMaskedStart(a)) params.start[a] = kMaskScore;
    for (size_t b = 0; b < T; ++b) {
      if (IsMaskedTransition(a, b)) params.transitions(a, b) = kMaskScore;
    }
  }
}

void ZeroMasked(CrfParams& grads) {
  for (size_t a = 0; a < T; ++a) {
    if (IsMaskedStart(a)) grads.start[a] = 0.0;
    for (size_t b = 0; b < T; ++b) {
      if (IsMaskedTransition(a, b)) grads.transitions(a, b) = 0.0;
    }
  }
}

CrfParams CrfParams::Zeros() { return {Matrix(T, T), Vector(T, 0.0), Vector(T, 0.0)}; }

CrfParams CrfParams::Masked() {
  CrfParams p = Zeros();
  ApplyMask(p);
  return p;
}

double ScoreSequence(const CrfParams& params, const Matrix& emissions,
                     std::span<const size_t> tags) {
  CheckEmissions(params, emissions);
  if (tags.size() != emissions.rows()) {
    throw ShapeError(fmt::format("ScoreSequence: {} tags for {} positions",
                                 tags.size(), emissions.rows()));
  }
  double score = params.start[tags[0]];
  for (size_t t = 0; t < tags.size(); ++t) {
    if (tags[t] >= T) throw ShapeError("ScoreSequence: tag out of range");
    // Same association order as the Viterbi recursion, so the two agree
    // exactly on the best path.
    if (t > 0) score += params.transitions(tags[t - 1], tags[t]);
    score += emissions(t, tags[t]);
  }
  return score + params.end[tags.back()];
}

double LogPartition(const CrfParams& params, const Matrix& emissions) {
  CheckEmissions(params, emissions);
  return FinalLogSum(params, ForwardScores(params, emissions));
}

Marginals PosteriorMarginals(const CrfParams& params, const Matrix& emissions) {
  CheckEmissions(params, emissions);
  const size_t n = emissions.rows();
  const Matrix alpha = ForwardScores(params, emissions);
  const Matrix beta = BackwardScores(params, emissions);
  const double log_z = FinalLogSum(params, alpha);
  Marginals m;
  m.unary = Matrix(n, T);
  for (size_t t = 0; t < n; ++t) {
    for (size_t y = 0; y < T; ++y) {
      m.unary(t, y) = std::exp(alpha(t, y) + beta(t, y) - log_z);
    }
  }
  m.pairwise.reserve(n > 0 ? n - 1 : 0);
  for (size_t t = 0; t + 1 < n; ++t) {
    Matrix pair(T, T);
    for (size_t x = 0; x < T; ++x) {
      for (size_t y = 0; y < T; ++y) {
        pair(x, y) = std::exp(alpha(t, x) + params.transitions(x, y) +
                              emissions(t + 1, y) + beta(t + 1, y) - log_z);
      }
    }
    m.pairwise.push_back(std::move(pair));
  }
  return m;
}

double NllAndGradient(const CrfParams& params, const Matrix& emissions,
                      std::span<const size_t> gold, Matrix& grad_emissions,
                      CrfParams& grads) {
  CheckEmissions(params, emissions);
  const size_t n = emissions.rows();
  if (gold.size() != n) {
    throw ShapeError(fmt::format("NllAndGradient: {} gold tags for {} positions",
                                 gold.size(), n));
  }
  if (grad_emissions.rows() != n || grad_emissions.cols() != T) {
    throw ShapeError("NllAndGradient: gradient buffer shape mismatch");
  }
  if (IsMaskedStart(gold[0])) {
    throw DataError("NllAndGradient: gold path starts with an I- tag");
  }
  for (size_t t = 1; t < n; ++t) {
    if (IsMaskedTransition(gold[t - 1], gold[t])) {
      throw DataError(fmt::format(
          "NllAndGradient: gold path has forbidden transition {} -> {} at {}",
          TagName(static_cast<Tag>(gold[t - 1])),
          TagName(static_cast<Tag>(gold[t])), t));
    }
  }
  const Marginals m = PosteriorMarginals(params, emissions);
  const double loss =
      LogPartition(params, emissions) - ScoreSequence(params, emissions, gold);

  AddScaled(grad_emissions.values(), m.unary.values());
  for (size_t t = 0; t < n; ++t) grad_emissions(t, gold[t]) -= 1.0;

  CrfParams local = CrfParams::Zeros();
  for (size_t y = 0; y < T; ++y) {
    local.start[y] = m.unary(0, y);
    local.end[y] = m.unary(n - 1, y);
  }
  local.start[gold[0]] -= 1.0;
  local.end[gold[n - 1]] -= 1.0;
  for (size_t t = 0; t + 1 < n; ++t) {
    AddScaled(local.transitions.values(), m.pairwise[t].values());
    local.transitions(gold[t], gold[t + 1]) -= 1.0;
  }
  ZeroMasked(local);
  AddScaled(grads.transitions.values(), local.transitions.values());
  AddScaled(grads.start, local.start);
  AddScaled(grads.end, local.end);
  // Rounding can push a perfect fit a hair below zero.
  return loss < 0.0 ? 0.0 : loss;
}

ViterbiResult Viterbi(const CrfParams& params, const Matrix& emissions) {
  CheckEmissions(params, emissions);
  const size_t n = emissions.rows();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  Matrix best(n, T, kNegInf);
  std::vector<std::array<size_t, T>> back(n);
  for (size_t y = 0; y < T; ++y) {
    if (!IsMaskedStart(y)) best(0, y) = params.start[y] + emissions(0, y);
  }
  for (size_t t = 1; t < n; ++t) {
    for (size_t y = 0; y < T; ++y) {
      double top = kNegInf;
      size_t arg = 0;
      for (size_t x = 0; x < T; ++x) {
        if (IsMaskedTransition(x, y) || best(t - 1, x) == kNegInf) continue;
        const double s = best(t - 1, x) + params.transitions(x, y);
        if (s > top) {
          top = s;
          arg = x;
        }
      }
      back[t][y] = arg;
      if (top != kNegInf) best(t, y) = top + emissions(t, y);
    }
  }
  ViterbiResult result;
  result.score = kNegInf;
  size_t last = 0;
  for (size_t y = 0; y < T; ++y) {
    if (best(n - 1, y) == kNegInf) continue;
    const double s = best(n - 1, y) + params.end[y];
    if (s > result.score) {
      result.score = s;
      last = y;
    }
  }
  result.tags.assign(n, 0);
  result.tags[n - 1] = last;
  for (size_t t = n - 1; t > 0; --t) result.tags[t - 1] = back[t][result.tags[t]];
  return result;
}

}  // namespace acrotag
