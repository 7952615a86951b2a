// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/adam.h"

#include <cmath>

namespace acrotag {
namespace {

void Update(std::span<double> param, std::span<const double> grad,
            std::span<double> m, std::span<double> v, const AdamConfig& c,
            double correction1, double correction2) {
  for (size_t i = 0; i < param.size(); ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * grad[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    param[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

}  // namespace

Adam::Adam(const AdamConfig& config, const Tagger& model) : config_(config) {
  for (std::span<const double> t : DenseTensors(model.params())) {
    first_.emplace_back(t.size(), 0.0);
    second_.emplace_back(t.size(), 0.0);
  }
}

void Adam::Step(Tagger& model, const TaggerGradients& grads) {
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  auto params = DenseTensors(model.mutable_params());
  auto dense = DenseTensors(grads.dense);
  for (size_t k = 0; k < params.size(); ++k) {
    Update(params[k], dense[k], first_[k], second_[k], config_, c1, c2);
  }
  if (HashedLookup* lookup = model.mutable_lookup()) {
    Matrix& table = lookup->mutable_params().table;
    for (const auto& [row, grad] : grads.lookup.rows) {
      auto [it, inserted] = rows_.try_emplace(row);
      if (inserted) {
        it->second.first.assign(grad.size(), 0.0);
        it->second.second.assign(grad.size(), 0.0);
      }
      Update(table.row(row), grad, it->second.first, it->second.second, config_,
             c1, c2);
    }
  }
}

double ClipGlobalNorm(TaggerGradients& grads, double max_norm) {
  const double norm = std::sqrt(grads.SquaredNorm());
  if (norm > max_norm && norm > 0.0) grads.Scale(max_norm / norm);
  return norm;
}

}  // namespace acrotag
