// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// The tagger: embedding provider -> BiLSTM -> linear emission layer -> CRF.

#ifndef ACROTAG_MODEL_H_
#define ACROTAG_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "acrotag/bio.h"
#include "acrotag/corpus.h"
#include "acrotag/crf.h"
#include "acrotag/embeddings.h"
#include "acrotag/linear.h"
#include "acrotag/lstm.h"
#include "acrotag/tokenizer.h"

namespace acrotag {

enum class ProviderKind { kFile, kHashed };

struct ModelConfig {
  size_t embedding_dim = 128;
  size_t hidden_size = 256;
  size_t tag_count = kNumTags;
  ProviderKind provider = ProviderKind::kHashed;
  uint64_t seed = 42;

  bool operator==(const ModelConfig&) const = default;
};

struct TaggerParams {
  BiLstmParams lstm;
  LinearParams emission;  // 2H -> T
  CrfParams crf;

  bool operator==(const TaggerParams&) const = default;
};

// Dense tensors of `params` in a fixed order, shared by the optimizer and the
// gradient utilities.
std::vector<std::span<double>> DenseTensors(TaggerParams& params);
std::vector<std::span<const double>> DenseTensors(const TaggerParams& params);

struct TaggerGradients {
  TaggerParams dense;
  SparseRowGradient lookup;

  void Add(const TaggerGradients& other);
  void Scale(double factor);
  double SquaredNorm() const;
};

struct Prediction {
  std::vector<CharSpan> short_spans;
  std::vector<CharSpan> long_spans;
  std::vector<Tag> tags;
};

class Tagger {
 public:
  // A model over a trainable hashed lookup whose vocabulary comes from
  // `training_tokens`. Parameters are drawn from config.seed.
  static Tagger CreateHashed(const ModelConfig& config,
                             std::span<const std::vector<Token>> training_tokens);

  // A model over precomputed embeddings. config.embedding_dim must match.
  static Tagger CreateWithFile(const ModelConfig& config,
                               std::shared_ptr<const EmbeddingFile> file);

  // Assembles a model from existing parameters (used when loading).
  Tagger(const ModelConfig& config, TaggerParams params,
         std::optional<HashedLookup> lookup,
         std::shared_ptr<const EmbeddingFile> file);

  const ModelConfig& config() const { return config_; }
  const EmbeddingProvider& provider() const;

  const TaggerParams& params() const { return params_; }
  TaggerParams& mutable_params() { return params_; }
  const HashedLookup* lookup() const { return lookup_ ? &*lookup_ : nullptr; }
  HashedLookup* mutable_lookup() { return lookup_ ? &*lookup_ : nullptr; }

  TaggerGradients ZeroGradients() const;

  // Per-token tag scores for the given embeddings (n x T).
  Matrix Emissions(const Matrix& embeddings) const;

  Prediction PredictTokens(std::string_view doc_id,
                           std::span<const Token> tokens) const;
  Prediction Predict(const Document& doc) const;

  struct LossOptions {
    double dropout = 0.0;  // embedding-level, inverted scaling
    uint64_t dropout_seed = 0;
  };

  // CRF negative log-likelihood of the sentence's tags. Gradients are added to
  // `grads`. An empty sentence has zero loss.
  double LossAndGradient(const TaggedSentence& sentence, TaggerGradients& grads,
                         const LossOptions& options) const;
  double LossAndGradient(const TaggedSentence& sentence,
                         TaggerGradients& grads) const {
    return LossAndGradient(sentence, grads, LossOptions{});
  }

  // Loss only; no dropout.
  double Loss(const TaggedSentence& sentence) const;

 private:
  ModelConfig config_;
  TaggerParams params_;
  std::optional<HashedLookup> lookup_;
  std::shared_ptr<const EmbeddingFile> file_;
};

}  // namespace acrotag

#endif  // ACROTAG_MODEL_H_
