// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Mini-batch maximum-likelihood training with Adam, gradient clipping and
// early stopping on dev macro-F1, plus the joint and per-language experiment
// modes.

#ifndef ACROTAG_TRAINER_H_
#define ACROTAG_TRAINER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "acrotag/checkpoint.h"
#include "acrotag/model.h"
#include "acrotag/scorer.h"

namespace acrotag {

enum class ExperimentMode { kJoint, kPerLanguage };

std::string_view ModeName(ExperimentMode mode);
std::optional<ExperimentMode> ParseMode(std::string_view name);

struct TrainConfig {
  size_t epochs = 20;
  double learning_rate = 1e-3;
  size_t batch_size = 32;
  size_t patience = 5;
  double clip_norm = 5.0;
  double dropout = 0.0;
  ExperimentMode mode = ExperimentMode::kJoint;
  uint64_t seed = 42;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Compute per-document gradients and dev predictions with OpenMP.
  bool parallel = true;

  // Throws ConfigError for non-positive values or patience > epochs.
  void Validate() const;
};

struct EpochReport {
  std::string model;  // "joint" or a slice name in per-language mode
  size_t epoch = 0;   // 1-based
  double mean_nll = 0.0;
  // Dev macro P/R/F1 per slice and pooled; empty without dev data.
  std::array<std::optional<Prf>, kNumSlices> slices;
  std::optional<Prf> overall;

  bool operator==(const EpochReport&) const = default;
};

nlohmann::json EpochReportToJson(const EpochReport& report);

// Tokenizes and projects gold spans. Projection warnings go to `warnings`.
std::vector<TaggedSentence> PrepareSentences(
    const std::vector<Document>& docs,
    std::vector<std::string>* warnings = nullptr);

// Copies of `docs` with spans replaced by the model's predictions.
std::vector<Document> PredictAll(const Tagger& model,
                                 const std::vector<Document>& docs,
                                 bool parallel = true);

SliceReport Evaluate(const Tagger& model, const std::vector<Document>& docs,
                     bool parallel = true);

// Number of sentences whose gradients are accumulated sequentially before
// the partial sums are combined in order. Results do not depend on the
// thread count.
inline constexpr size_t kGradientChunk = 4;

struct BatchGradient {
  TaggerGradients grads;  // summed, not averaged
  std::vector<double> losses;
};

// Gradient of the summed loss over sentences[batch[i]]. The parallel and
// serial paths are bit-identical. `dropout_seeds`, when non-empty, supplies
// one seed per batch entry.
BatchGradient ComputeBatchGradient(const Tagger& model,
                                   std::span<const TaggedSentence> sentences,
                                   std::span<const size_t> batch,
                                   double dropout,
                                   std::span<const uint64_t> dropout_seeds,
                                   bool parallel);

struct TrainResult {
  Tagger best;
  TrainingMetadata metadata;
  std::vector<EpochReport> reports;
};

using EpochCallback = std::function<void(const EpochReport&)>;

// Trains one model. With an empty dev set every epoch runs and the final
// model is returned; otherwise training stops after `patience` epochs without
// a strict improvement in pooled dev macro-F1 and the best model is returned.
TrainResult Train(const std::vector<Document>& train,
                  const std::vector<Document>& dev, const ModelConfig& model,
                  const TrainConfig& config,
                  std::shared_ptr<const EmbeddingFile> file = nullptr,
                  const EpochCallback& on_epoch = {});

struct TrainedModel {
  std::string label;
  TrainResult result;
};

// Joint mode trains one model on everything. Per-language mode trains one
// model per slice that has training data, on that slice only.
std::vector<TrainedModel> TrainExperiment(
    const std::vector<Document>& train, const std::vector<Document>& dev,
    const ModelConfig& model, const TrainConfig& config,
    std::shared_ptr<const EmbeddingFile> file = nullptr,
    const EpochCallback& on_epoch = {});

struct GridSpec {
  std::vector<ExperimentMode> modes = {ExperimentMode::kJoint};
  // Pretraining-epoch tags, e.g. {"0", "1", "3"}. Ignored for hashed models.
  std::vector<std::string> epoch_tags;
  std::map<std::string, std::filesystem::path> embeddings;
};

struct GridRow {
  std::string label;  // r1, r2, ...
  ExperimentMode mode = ExperimentMode::kJoint;
  std::string epochs;  // pretraining tag or "-"
  std::optional<Prf> all;
  std::array<std::optional<Prf>, kNumSlices> slices;
};

// Runs every (mode, tag) combination and scores it on `dev`. Throws
// ConfigError when a file-provider run lacks an embedding file for a tag.
std::vector<GridRow> RunExperimentGrid(const std::vector<Document>& train,
                                       const std::vector<Document>& dev,
                                       const GridSpec& spec,
                                       const ModelConfig& model,
                                       const TrainConfig& config);

std::string FormatGridTable(const std::vector<GridRow>& rows);

}  // namespace acrotag

#endif  // ACROTAG_TRAINER_H_
