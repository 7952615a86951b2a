// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/model.h"

#include <fmt/format.h>

#include "acrotag/errors.h"

namespace acrotag {
namespace {

std::vector<size_t> TagIndices(std::span<const Tag> tags) {
  std::vector<size_t> out;
  out.reserve(tags.size());
  for (Tag tag : tags) out.push_back(TagIndex(tag));
  return out;
}

void CheckConfig(const ModelConfig& config) {
  if (config.hidden_size == 0 || config.embedding_dim == 0) {
    throw ConfigError("model dimensions must be positive");
  }
  if (config.tag_count != kNumTags) {
    throw ConfigError(fmt::format("tag count must be {}", kNumTags));
  }
}

TaggerParams RandomParams(const ModelConfig& config, SplitMix64& rng) {
  TaggerParams p;
  p.lstm = BiLstmParams::Random(config.embedding_dim, config.hidden_size, rng);
  p.emission = LinearParams::Random(2 * config.hidden_size, kNumTags, rng);
  p.crf = CrfParams::Masked();
  return p;
}

}  // namespace

std::vector<std::span<double>> DenseTensors(TaggerParams& p) {
  return {p.lstm.forward.w.values(),  p.lstm.forward.u.values(),
          p.lstm.forward.b,           p.lstm.backward.w.values(),
          p.lstm.backward.u.values(), p.lstm.backward.b,
          p.emission.weight.values(), p.emission.bias,
          p.crf.transitions.values(), p.crf.start,
          p.crf.end};
}

std::vector<std::span<const double>> DenseTensors(const TaggerParams& p) {
  std::vector<std::span<const double>> out;
  for (std::span<double> s : DenseTensors(const_cast<TaggerParams&>(p))) {
    out.emplace_back(s);
  }
  return out;
}

void TaggerGradients::Add(const TaggerGradients& other) {
  auto mine = DenseTensors(dense);
  auto theirs = DenseTensors(other.dense);
  for (size_t i = 0; i < mine.size(); ++i) AddScaled(mine[i], theirs[i]);
  lookup.Add(other.lookup);
}

void TaggerGradients::Scale(double factor) {
  for (std::span<double> t : DenseTensors(dense)) ScaleInPlace(t, factor);
  lookup.Scale(factor);
}

double TaggerGradients::SquaredNorm() const {
  double sum = lookup.SquaredNorm();
  for (std::span<const double> t : DenseTensors(dense)) {
    sum += acrotag::SquaredNorm(t);
  }
  return sum;
}

Tagger::Tagger(const ModelConfig& config, TaggerParams params,
               std::optional<HashedLookup> lookup,
               std::shared_ptr<const EmbeddingFile> file)
    : config_(config),
      params_(std::move(params)),
      lookup_(std::move(lookup)),
      file_(std::move(file)) {
  CheckConfig(config_);
  if (config_.provider == ProviderKind::kHashed && !lookup_) {
    throw ConfigError("hashed provider requires a lookup table");
  }
  if (config_.provider == ProviderKind::kFile && !file_) {
    throw ConfigError("file provider requires an embedding file");
  }
  if (provider().dim() != config_.embedding_dim) {
    throw ConfigError(fmt::format("embedding dimension {} does not match model {}",
                                provider().dim(), config_.embedding_dim));
  }
  const size_t hd = config_.hidden_size;
  if (params_.lstm.input_dim() != config_.embedding_dim ||
      params_.lstm.hidden_dim() != hd ||
      params_.lstm.backward.input_dim != config_.embedding_dim ||
      params_.lstm.backward.hidden_dim != hd ||
      params_.emission.in_dim() != 2 * hd ||
      params_.emission.out_dim() != kNumTags) {
    throw ShapeError("Tagger: parameter shapes do not match the config");
  }
}

Tagger Tagger::CreateHashed(
    const ModelConfig& config,
    std::span<const std::vector<Token>> training_tokens) {
  ModelConfig c = config;
  c.provider = ProviderKind::kHashed;
  CheckConfig(c);
  SplitMix64 rng(c.seed);
  HashedLookup lookup =
      HashedLookup::Build(training_tokens, c.embedding_dim, rng);
  TaggerParams params = RandomParams(c, rng);
  return Tagger(c, std::move(params), std::move(lookup), nullptr);
}

Tagger Tagger::CreateWithFile(const ModelConfig& config,
                              std::shared_ptr<const EmbeddingFile> file) {
  ModelConfig c = config;
  c.provider = ProviderKind::kFile;
  CheckConfig(c);
  SplitMix64 rng(c.seed);
  TaggerParams params = RandomParams(c, rng);
  return Tagger(c, std::move(params), std::nullopt, std::move(file));
}

const EmbeddingProvider& Tagger::provider() const {
  if (lookup_) return *lookup_;
  return *file_;
}

TaggerGradients Tagger::ZeroGradients() const {
  TaggerGradients g;
  g.dense.lstm =
      BiLstmParams::Zeros(config_.embedding_dim, config_.hidden_size);
  g.dense.emission = LinearParams::Zeros(2 * config_.hidden_size, kNumTags);
  g.dense.crf = CrfParams::Zeros();
  return g;
}

Matrix Tagger::Emissions(const Matrix& embeddings) const {
  const BiLstmTape tape = BiLstmForward(params_.lstm, embeddings);
  return LinearForward(params_.emission, tape.output);
}

Prediction Tagger::PredictTokens(std::string_view doc_id,
                                 std::span<const Token> tokens) const {
  Prediction out;
  if (tokens.empty()) return out;
  const Matrix emissions = Emissions(provider().Embed(doc_id, tokens));
  const ViterbiResult best = Viterbi(params_.crf, emissions);
  out.tags.reserve(best.tags.size());
  for (size_t tag : best.tags) out.tags.push_back(static_cast<Tag>(tag));
  DecodedSpans spans = DecodeTags(tokens, out.tags);
  out.short_spans = std::move(spans.short_spans);
  out.long_spans = std::move(spans.long_spans);
  return out;
}

Prediction Tagger::Predict(const Document& doc) const {
  const std::vector<Token> tokens = Tokenize(doc.text);
  return PredictTokens(doc.id, tokens);
}

double Tagger::LossAndGradient(const TaggedSentence& sentence,
                               TaggerGradients& grads,
                               const LossOptions& options) const {
  const size_t n = sentence.tokens.size();
  if (sentence.tags.size() != n) {
    throw ShapeError(fmt::format("sentence '{}': {} tokens but {} tags",
                                 sentence.doc_id, n, sentence.tags.size()));
  }
  if (n == 0) return 0.0;
  Matrix inputs = provider().Embed(sentence.doc_id, sentence.tokens);
  Matrix dropout_mask;
  if (options.dropout > 0.0) {
    SplitMix64 rng(options.dropout_seed);
    const double keep = 1.0 - options.dropout;
    dropout_mask = Matrix(inputs.rows(), inputs.cols());
    std::span<double> mask = dropout_mask.values();
    std::span<double> values = inputs.values();
    for (size_t i = 0; i < mask.size(); ++i) {
      mask[i] = rng.NextDouble() < keep ? 1.0 / keep : 0.0;
      values[i] *= mask[i];
    }
  }
  const BiLstmTape tape = BiLstmForward(params_.lstm, inputs);
  const Matrix emissions = LinearForward(params_.emission, tape.output);

  Matrix grad_emissions(n, kNumTags);
  const std::vector<size_t> gold = TagIndices(sentence.tags);
  const double loss = NllAndGradient(params_.crf, emissions, gold,
                                     grad_emissions, grads.dense.crf);
  const Matrix grad_hidden = LinearBackward(params_.emission, tape.output,
                                            grad_emissions, grads.dense.emission);
  Matrix grad_inputs =
      BiLstmBackward(params_.lstm, tape, grad_hidden, grads.dense.lstm);
  if (lookup_) {
    if (!dropout_mask.empty()) {
      std::span<double> g = grad_inputs.values();
      std::span<const double> mask = dropout_mask.values();
      for (size_t i = 0; i < g.size(); ++i) g[i] *= mask[i];
    }
    HashedLookup::Backward(lookup_->Rows(sentence.tokens), grad_inputs,
                           grads.lookup);
  }
  return loss;
}

double Tagger::Loss(const TaggedSentence& sentence) const {
  if (sentence.tokens.empty()) return 0.0;
  const Matrix emissions =
      Emissions(provider().Embed(sentence.doc_id, sentence.tokens));
  std::vector<size_t> gold = TagIndices(sentence.tags);
  return LogPartition(params_.crf, emissions) -
         ScoreSequence(params_.crf, emissions, gold);
}

}  // namespace acrotag
