// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/linear.h"

#include <cmath>

#include <gtest/gtest.h>

#include "acrotag/errors.h"
#include "test_support.h"

namespace acrotag {
namespace {

TEST(LinearTest, IdentityWeights) {
  LinearParams p = LinearParams::Zeros(3, 3);
  for (size_t i = 0; i < 3; ++i) p.weight(i, i) = 1.0;
  EXPECT_EQ(LinearForward(p, Vector{1.5, -2, 0.25}), (Vector{1.5, -2, 0.25}));
}

TEST(LinearTest, BiasOnly) {
  LinearParams p = LinearParams::Zeros(2, 3);
  p.bias = {1, 2, 3};
  EXPECT_EQ(LinearForward(p, Vector{7, 8}), (Vector{1, 2, 3}));
}

TEST(LinearTest, RowWiseMatchesVectorForm) {
  SplitMix64 rng(5);
  const LinearParams p = LinearParams::Random(4, 5, rng);
  const Matrix x = testing::RandomMatrix(3, 4, -1, 1, rng);
  const Matrix y = LinearForward(p, x);
  for (size_t r = 0; r < 3; ++r) {
    const Vector v = LinearForward(p, x.row(r));
    for (size_t c = 0; c < 5; ++c) EXPECT_EQ(y(r, c), v[c]);
  }
}

TEST(LinearTest, GradientMatchesFiniteDifferences) {
  SplitMix64 rng(6);
  LinearParams p = LinearParams::Random(4, 3, rng);
  Matrix x = testing::RandomMatrix(2, 4, -1, 1, rng);
  const Matrix g = testing::RandomMatrix(2, 3, -1, 1, rng);
  // f = sum(g .* (xW^T + b))
  auto f = [&] {
    const Matrix y = LinearForward(p, x);
    double s = 0;
    for (size_t i = 0; i < y.size(); ++i) s += y.values()[i] * g.values()[i];
    return s;
  };
  LinearParams grads = LinearParams::Zeros(4, 3);
  const Matrix gx = LinearBackward(p, x, g, grads);
  auto check = [&](std::span<double> values, std::span<const double> analytic) {
    for (size_t i = 0; i < values.size(); ++i) {
      const double numeric = testing::CentralDifference(&values[i], 1e-5, f);
      EXPECT_TRUE(testing::GradientClose(analytic[i], numeric, 1e-6, 1e-9))
          << i << ": " << analytic[i] << " vs " << numeric;
    }
  };
  check(p.weight.values(), grads.weight.values());
  check(p.bias, grads.bias);
  check(x.values(), gx.values());
}

TEST(LinearTest, ShapeMismatchThrows) {
  const LinearParams p = LinearParams::Zeros(2, 3);
  EXPECT_THROW(LinearForward(p, Vector{1, 2, 3}), ShapeError);
}

TEST(LogSumExpTest, KnownValues) {
  EXPECT_NEAR(LogSumExp(Vector{0, 0, 0, 0, 0}), std::log(5.0), 1e-15);
  EXPECT_NEAR(LogSumExp(Vector{1000, 1000}), 1000 + std::log(2.0), 1e-12);
  EXPECT_EQ(LogSumExp(Vector{-3.5}), -3.5);
  EXPECT_THROW(LogSumExp(Vector{}), ShapeError);
}

TEST(LogSumExpTest, AgreesWithNaiveFormOnModerateInputs) {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    Vector v(1 + rng.Below(10));
    double naive = 0;
    for (double& x : v) {
      x = rng.Uniform(-5, 5);
      naive += std::exp(x);
    }
    EXPECT_NEAR(LogSumExp(v), std::log(naive), 1e-12);
  }
}

}  // namespace
}  // namespace acrotag
