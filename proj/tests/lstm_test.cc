// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/lstm.h"

#include <cmath>

#include <gtest/gtest.h>

#include "acrotag/errors.h"
#include "test_support.h"

namespace acrotag {
namespace {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Direct transcription of the cell equations with gate blocks [i, f, g, o].
LstmState OracleStep(const LstmParams& p, const Vector& x, const Vector& h,
                     const Vector& c) {
  const size_t H = p.hidden_dim;
  Vector z(4 * H);
  for (size_t r = 0; r < 4 * H; ++r) {
    double s = p.b[r];
    for (size_t k = 0; k < p.input_dim; ++k) s += p.w(r, k) * x[k];
    for (size_t k = 0; k < H; ++k) s += p.u(r, k) * h[k];
    z[r] = s;
  }
  LstmState out{Vector(H), Vector(H)};
  for (size_t j = 0; j < H; ++j) {
    const double i = Sigmoid(z[j]);
    const double f = Sigmoid(z[H + j]);
    const double g = std::tanh(z[2 * H + j]);
    const double o = Sigmoid(z[3 * H + j]);
    out.c[j] = f * c[j] + i * g;
    out.h[j] = o * std::tanh(out.c[j]);
  }
  return out;
}

TEST(LstmTest, ZeroParametersHalveTheCell) {
  const LstmParams p = LstmParams::Zeros(2, 1);
  const LstmState s = LstmStep(p, Vector{0.3, -0.7}, Vector{0.0}, Vector{1.0});
  EXPECT_DOUBLE_EQ(s.c[0], 0.5);
  EXPECT_NEAR(s.h[0], 0.5 * std::tanh(0.5), 1e-15);
  EXPECT_NEAR(s.h[0], 0.23105, 1e-5);
}

TEST(LstmTest, RandomInitRangesAndForgetBias) {
  SplitMix64 rng(3);
  const LstmParams p = LstmParams::Random(4, 9, rng);
  for (double v : p.w.values()) EXPECT_LE(std::abs(v), 1.0 / std::sqrt(4.0));
  for (double v : p.u.values()) EXPECT_LE(std::abs(v), 1.0 / 3.0);
  for (size_t j = 0; j < 9; ++j) {
    EXPECT_EQ(p.b[9 + j], 1.0);
    EXPECT_LE(std::abs(p.b[j]), 1.0 / 3.0);
  }
}

TEST(LstmTest, StepMatchesOracle) {
  SplitMix64 rng(4);
  const LstmParams p = LstmParams::Random(3, 4, rng);
  Vector x = {0.1, -0.4, 0.9}, h = {0.2, 0, -0.1, 0.3}, c = {1, -1, 0.5, 0};
  const LstmState got = LstmStep(p, x, h, c);
  const LstmState want = OracleStep(p, x, h, c);
  for (size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(got.h[j], want.h[j], 1e-14);
    EXPECT_NEAR(got.c[j], want.c[j], 1e-14);
  }
}

TEST(LstmTest, StepShapeMismatchThrows) {
  const LstmParams p = LstmParams::Zeros(2, 3);
  EXPECT_THROW(LstmStep(p, Vector{1}, Vector(3), Vector(3)), ShapeError);
  EXPECT_THROW(LstmStep(p, Vector(2), Vector(2), Vector(3)), ShapeError);
}

TEST(LstmTest, ForwardAndReverseSequencesMatchOracle) {
  SplitMix64 rng(5);
  const LstmParams p = LstmParams::Random(2, 3, rng);
  const Matrix x = testing::RandomMatrix(4, 2, -1, 1, rng);
  for (bool reversed : {false, true}) {
    const LstmTape tape = LstmForward(p, x, reversed);
    Vector h(3), c(3);
    for (size_t k = 0; k < 4; ++k) {
      const size_t t = reversed ? 3 - k : k;
      const Vector xt(x.row(t).begin(), x.row(t).end());
      const LstmState s = OracleStep(p, xt, h, c);
      h = s.h;
      c = s.c;
      for (size_t j = 0; j < 3; ++j) EXPECT_NEAR(tape.hidden(t, j), h[j], 1e-14);
    }
  }
}

TEST(BiLstmTest, PalindromeInputWithSharedWeightsIsMirrored) {
  SplitMix64 rng(6);
  BiLstmParams p = BiLstmParams::Random(2, 3, rng);
  p.backward = p.forward;
  Matrix x(5, 2);
  for (size_t t = 0; t < 5; ++t) {
    const size_t m = std::min(t, 4 - t);
    x(t, 0) = 0.3 * static_cast<double>(m) - 0.2;
    x(t, 1) = std::sin(static_cast<double>(m));
  }
  const BiLstmTape tape = BiLstmForward(p, x);
  ASSERT_EQ(tape.output.cols(), 6u);
  for (size_t t = 0; t < 5; ++t) {
    for (size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(tape.output(t, j), tape.output(4 - t, 3 + j));
    }
  }
}

TEST(BiLstmTest, EmptyInputAndMissingTape) {
  const BiLstmParams p = BiLstmParams::Zeros(2, 3);
  EXPECT_THROW(BiLstmForward(p, Matrix(0, 2)), ShapeError);
  BiLstmParams grads = BiLstmParams::Zeros(2, 3);
  EXPECT_THROW(BiLstmBackward(p, BiLstmTape{}, Matrix(1, 6), grads), Error);
}

TEST(BiLstmTest, GradientMatchesFiniteDifferences) {
  SplitMix64 rng(7);
  BiLstmParams p = BiLstmParams::Random(2, 3, rng);
  Matrix x = testing::RandomMatrix(3, 2, -1, 1, rng);
  const Matrix g = testing::RandomMatrix(3, 6, -1, 1, rng);
  auto f = [&] {
    const BiLstmTape tape = BiLstmForward(p, x);
    double s = 0;
    for (size_t i = 0; i < g.size(); ++i) {
      s += g.values()[i] * tape.output.values()[i];
    }
    return s;
  };
  BiLstmParams grads = BiLstmParams::Zeros(2, 3);
  const Matrix gx = BiLstmBackward(p, BiLstmForward(p, x), g, grads);
  auto check = [&](std::span<double> values, std::span<const double> analytic,
                   const char* name) {
    for (size_t i = 0; i < values.size(); ++i) {
      const double numeric = testing::CentralDifference(&values[i], 1e-5, f);
      EXPECT_TRUE(testing::GradientClose(analytic[i], numeric, 1e-4, 1e-7))
          << name << "[" << i << "] " << analytic[i] << " vs " << numeric;
    }
  };
  for (auto* dir : {&p.forward, &p.backward}) {
    auto* gdir = dir == &p.forward ? &grads.forward : &grads.backward;
    check(dir->w.values(), gdir->w.values(), "w");
    check(dir->u.values(), gdir->u.values(), "u");
    check(dir->b, gdir->b, "b");
  }
  check(x.values(), gx.values(), "x");
}

TEST(BiLstmTest, BackwardIsLinearInUpstreamGradient) {
  SplitMix64 rng(8);
  const BiLstmParams p = BiLstmParams::Random(2, 3, rng);
  const Matrix x = testing::RandomMatrix(4, 2, -1, 1, rng);
  const Matrix g1 = testing::RandomMatrix(4, 6, -1, 1, rng);
  const Matrix g2 = testing::RandomMatrix(4, 6, -1, 1, rng);
  Matrix sum = g1;
  AddScaled(sum.values(), g2.values(), 2.0);
  const BiLstmTape tape = BiLstmForward(p, x);
  BiLstmParams a = BiLstmParams::Zeros(2, 3), b = a, c = a;
  const Matrix x1 = BiLstmBackward(p, tape, g1, a);
  const Matrix x2 = BiLstmBackward(p, tape, g2, b);
  const Matrix xs = BiLstmBackward(p, tape, sum, c);
  for (size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(xs.values()[i], x1.values()[i] + 2 * x2.values()[i], 1e-12);
  }
  for (size_t i = 0; i < c.forward.w.size(); ++i) {
    EXPECT_NEAR(c.forward.w.values()[i],
                a.forward.w.values()[i] + 2 * b.forward.w.values()[i], 1e-12);
  }
}

}  // namespace
}  // namespace acrotag
