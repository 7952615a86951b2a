// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#ifndef ACROTAG_ADAM_H_
#define ACROTAG_ADAM_H_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "acrotag/model.h"

namespace acrotag {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam over the dense tagger parameters. Lookup-table rows are updated
// lazily: only rows present in a step's gradient move, with the moments of
// each row kept from the last time it was touched.
class Adam {
 public:
  Adam(const AdamConfig& config, const Tagger& model);

  void Step(Tagger& model, const TaggerGradients& grads);

  uint64_t steps() const { return steps_; }

 private:
  AdamConfig config_;
  uint64_t steps_ = 0;
  std::vector<Vector> first_;
  std::vector<Vector> second_;
  struct RowMoments {
    Vector first;
    Vector second;
  };
  std::unordered_map<size_t, RowMoments> rows_;
};

// Rescales `grads` so their global L2 norm is at most `max_norm`. Returns the
// norm before clipping.
double ClipGlobalNorm(TaggerGradients& grads, double max_norm);

}  // namespace acrotag

#endif  // ACROTAG_ADAM_H_
