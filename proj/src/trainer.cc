// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/trainer.h"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "acrotag/adam.h"
#include "acrotag/errors.h"
#include "acrotag/kernels.h"
#include "acrotag/random.h"

namespace acrotag {
namespace {

constexpr std::array<std::string_view, 2> kModeNames = {"joint",
                                                        "per-language"};

std::vector<std::vector<Token>> TokensOf(
    const std::vector<TaggedSentence>& sentences) {
  std::vector<std::vector<Token>> out;
  out.reserve(sentences.size());
  for (const TaggedSentence& s : sentences) out.push_back(s.tokens);
  return out;
}

Tagger CreateModel(const ModelConfig& config,
                   const std::vector<TaggedSentence>& sentences,
                   std::shared_ptr<const EmbeddingFile> file) {
  if (config.provider == ProviderKind::kHashed) {
    const auto tokens = TokensOf(sentences);
    return Tagger::CreateHashed(config, tokens);
  }
  if (!file) throw ConfigError("file provider selected but no embedding file");
  // The file header decides the input width.
  ModelConfig sized = config;
  sized.embedding_dim = file->dim();
  return Tagger::CreateWithFile(sized, std::move(file));
}

void FillDevScores(const SliceReport& dev, EpochReport& report) {
  report.overall = dev.all.macro;
  for (size_t s = 0; s < kNumSlices; ++s) {
    if (dev.slices[s]) report.slices[s] = dev.slices[s]->macro;
  }
}

std::string BatchIds(std::span<const TaggedSentence> sentences,
                     std::span<const size_t> batch) {
  std::string out;
  for (size_t i = 0; i < batch.size() && i < 8; ++i) {
    if (!out.empty()) out += ", ";
    out += sentences[batch[i]].doc_id;
  }
  if (batch.size() > 8) out += ", ...";
  return out;
}

}  // namespace

std::string_view ModeName(ExperimentMode mode) {
  return kModeNames[static_cast<size_t>(mode)];
}

std::optional<ExperimentMode> ParseMode(std::string_view name) {
  for (size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return static_cast<ExperimentMode>(i);
  }
  return std::nullopt;
}

void TrainConfig::Validate() const {
  auto require = [](bool ok, std::string_view what) {
    if (!ok) throw ConfigError(fmt::format("invalid training config: {}", what));
  };
  require(epochs >= 1, "epochs must be positive");
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(batch_size >= 1, "batch_size must be positive");
  require(patience >= 1, "patience must be positive");
  require(patience <= epochs, "patience must not exceed epochs");
  require(clip_norm > 0.0, "clip_norm must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
  require(beta1 > 0.0 && beta1 < 1.0, "beta1 must be in (0, 1)");
  require(beta2 > 0.0 && beta2 < 1.0, "beta2 must be in (0, 1)");
  require(epsilon > 0.0, "epsilon must be positive");
}

nlohmann::json EpochReportToJson(const EpochReport& report) {
  nlohmann::json out;
  out["model"] = report.model;
  out["epoch"] = report.epoch;
  out["mean_nll"] = report.mean_nll;
  if (!report.overall) {
    out["dev"] = nullptr;
    return out;
  }
  nlohmann::json dev;
  dev["all"] = PrfToJson(*report.overall);
  for (Slice slice : kAllSlices) {
    const auto& prf = report.slices[static_cast<size_t>(slice)];
    dev[std::string(SliceName(slice))] =
        prf ? PrfToJson(*prf) : nlohmann::json(nullptr);
  }
  out["dev"] = std::move(dev);
  return out;
}

std::vector<TaggedSentence> PrepareSentences(const std::vector<Document>& docs,
                                             std::vector<std::string>* warnings) {
  std::vector<TaggedSentence> out;
  out.reserve(docs.size());
  for (const Document& doc : docs) out.push_back(MakeTaggedSentence(doc, warnings));
  return out;
}

std::vector<Document> PredictAll(const Tagger& model,
                                 const std::vector<Document>& docs,
                                 bool parallel) {
  std::vector<Document> out(docs.size());
  kernels::ParallelFor(docs.size(), parallel, [&](size_t i) {
    Prediction p = model.Predict(docs[i]);
    Document doc = docs[i];
    doc.short_spans = std::move(p.short_spans);
    doc.long_spans = std::move(p.long_spans);
    out[i] = std::move(doc);
  });
  return out;
}

SliceReport Evaluate(const Tagger& model, const std::vector<Document>& docs,
                     bool parallel) {
  return ScoreBySlice(PredictAll(model, docs, parallel), docs);
}

BatchGradient ComputeBatchGradient(const Tagger& model,
                                   std::span<const TaggedSentence> sentences,
                                   std::span<const size_t> batch,
                                   double dropout,
                                   std::span<const uint64_t> dropout_seeds,
                                   bool parallel) {
  if (!dropout_seeds.empty() && dropout_seeds.size() != batch.size()) {
    throw ShapeError("ComputeBatchGradient: one dropout seed per sentence");
  }
  const size_t chunks = (batch.size() + kGradientChunk - 1) / kGradientChunk;
  std::vector<TaggerGradients> partial(chunks);
  BatchGradient out;
  out.losses.assign(batch.size(), 0.0);
  kernels::ParallelFor(chunks, parallel, [&](size_t c) {
    partial[c] = model.ZeroGradients();
    const size_t end = std::min(batch.size(), (c + 1) * kGradientChunk);
    for (size_t i = c * kGradientChunk; i < end; ++i) {
      Tagger::LossOptions options;
      options.dropout = dropout;
      if (!dropout_seeds.empty()) options.dropout_seed = dropout_seeds[i];
      out.losses[i] =
          model.LossAndGradient(sentences[batch[i]], partial[c], options);
    }
  });
  out.grads = chunks > 0 ? std::move(partial[0]) : model.ZeroGradients();
  for (size_t c = 1; c < chunks; ++c) out.grads.Add(partial[c]);
  return out;
}

TrainResult Train(const std::vector<Document>& train,
                  const std::vector<Document>& dev, const ModelConfig& model_config,
                  const TrainConfig& config,
                  std::shared_ptr<const EmbeddingFile> file,
                  const EpochCallback& on_epoch) {
  config.Validate();
  if (train.empty()) throw DataError("training set is empty");
  const std::vector<TaggedSentence> sentences = PrepareSentences(train);
  Tagger model = CreateModel(model_config, sentences, std::move(file));

  AdamConfig adam_config;
  adam_config.learning_rate = config.learning_rate;
  adam_config.beta1 = config.beta1;
  adam_config.beta2 = config.beta2;
  adam_config.epsilon = config.epsilon;
  Adam adam(adam_config, model);

  SplitMix64 shuffle_rng(config.seed);
  std::vector<size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), size_t{0});

  std::optional<Tagger> best;
  TrainingMetadata best_meta;
  double best_f1 = -1.0;
  size_t since_best = 0;
  std::vector<EpochReport> reports;

  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    Shuffle(order, shuffle_rng);
    double loss_sum = 0.0;
    for (size_t begin = 0, b = 0; begin < order.size();
         begin += config.batch_size, ++b) {
      const size_t end = std::min(order.size(), begin + config.batch_size);
      std::span<const size_t> batch(order.data() + begin, end - begin);
      std::vector<uint64_t> seeds;
      if (config.dropout > 0.0) {
        for (size_t index : batch) {
          seeds.push_back(DeriveSeed(config.seed, (epoch << 32) + index));
        }
      }
      BatchGradient step = ComputeBatchGradient(model, sentences, batch,
                                                config.dropout, seeds,
                                                config.parallel);
      double batch_loss = 0.0;
      for (double l : step.losses) batch_loss += l;
      step.grads.Scale(1.0 / static_cast<double>(batch.size()));
      const double norm = ClipGlobalNorm(step.grads, config.clip_norm);
      if (!std::isfinite(batch_loss) || !std::isfinite(norm)) {
        throw NumericError(fmt::format(
            "non-finite loss or gradient at epoch {}, batch {} (loss {}, "
            "gradient norm {}; documents: {})",
            epoch, b, batch_loss, norm, BatchIds(sentences, batch)));
      }
      loss_sum += batch_loss;
      adam.Step(model, step.grads);
    }

    EpochReport report;
    report.model = config.mode == ExperimentMode::kJoint ? "joint" : "model";
    report.epoch = epoch;
    report.mean_nll = loss_sum / static_cast<double>(sentences.size());
    bool stop = false;
    if (!dev.empty()) {
      const SliceReport scores = Evaluate(model, dev, config.parallel);
      FillDevScores(scores, report);
      const double f1 = scores.all.macro.f1;
      if (f1 > best_f1) {
        best_f1 = f1;
        best = model;
        best_meta = {static_cast<uint32_t>(epoch), f1};
        since_best = 0;
      } else if (++since_best >= config.patience) {
        stop = true;
      }
    } else {
      best_meta = {static_cast<uint32_t>(epoch), 0.0};
    }
    reports.push_back(report);
    if (on_epoch) on_epoch(report);
    if (stop) break;
  }
  if (!best) best = std::move(model);
  return {std::move(*best), best_meta, std::move(reports)};
}

std::vector<TrainedModel> TrainExperiment(
    const std::vector<Document>& train, const std::vector<Document>& dev,
    const ModelConfig& model, const TrainConfig& config,
    std::shared_ptr<const EmbeddingFile> file, const EpochCallback& on_epoch) {
  std::vector<TrainedModel> out;
  if (config.mode == ExperimentMode::kJoint) {
    out.push_back({"joint", Train(train, dev, model, config, file, on_epoch)});
    return out;
  }
  for (Slice slice : kAllSlices) {
    const std::vector<Document> slice_train = FilterSlice(train, slice);
    if (slice_train.empty()) continue;
    const std::string label(SliceName(slice));
    EpochCallback labeled;
    if (on_epoch) {
      labeled = [&](const EpochReport& r) {
        EpochReport copy = r;
        copy.model = label;
        on_epoch(copy);
      };
    }
    TrainResult result = Train(slice_train, FilterSlice(dev, slice), model,
                               config, file, labeled);
    for (EpochReport& r : result.reports) r.model = label;
    out.push_back({label, std::move(result)});
  }
  if (out.empty()) throw DataError("training set is empty");
  return out;
}

std::vector<GridRow> RunExperimentGrid(const std::vector<Document>& train,
                                       const std::vector<Document>& dev,
                                       const GridSpec& spec,
                                       const ModelConfig& model,
                                       const TrainConfig& config) {
  const bool hashed = model.provider == ProviderKind::kHashed;
  std::vector<std::string> tags = spec.epoch_tags;
  if (hashed || tags.empty()) tags = {"-"};
  if (!hashed) {
    for (const std::string& tag : tags) {
      if (!spec.embeddings.count(tag)) {
        throw ConfigError(fmt::format(
            "no embedding file for pretraining-epoch tag '{}'", tag));
      }
    }
  }
  std::vector<GridRow> rows;
  for (ExperimentMode mode : spec.modes) {
    for (const std::string& tag : tags) {
      std::shared_ptr<const EmbeddingFile> file;
      if (!hashed) file = EmbeddingFile::Open(spec.embeddings.at(tag));
      TrainConfig run = config;
      run.mode = mode;
      GridRow row;
      row.label = fmt::format("r{}", rows.size() + 1);
      row.mode = mode;
      row.epochs = tag;
      for (const TrainedModel& trained :
           TrainExperiment(train, dev, model, run, file)) {
        if (mode == ExperimentMode::kJoint) {
          if (dev.empty()) continue;
          const SliceReport scores =
              Evaluate(trained.result.best, dev, config.parallel);
          row.all = scores.all.macro;
          for (size_t s = 0; s < kNumSlices; ++s) {
            if (scores.slices[s]) row.slices[s] = scores.slices[s]->macro;
          }
        } else {
          const Slice slice = *ParseSlice(trained.label);
          const std::vector<Document> slice_dev = FilterSlice(dev, slice);
          if (slice_dev.empty()) continue;
          row.slices[static_cast<size_t>(slice)] =
              Evaluate(trained.result.best, slice_dev, config.parallel)
                  .all.macro;
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string FormatGridTable(const std::vector<GridRow>& rows) {
  constexpr int kCell = 19;
  std::string out =
      fmt::format("{:<4}{:<14}{:>7}{:>{}}", "", "mode", "epochs", "all", kCell);
  for (Slice slice : kAllSlices) out += fmt::format("{:>{}}", SliceName(slice), kCell);
  out += "\n";
  for (const GridRow& row : rows) {
    out += fmt::format("{:<4}{:<14}{:>7}{:>{}}", row.label, ModeName(row.mode),
                       row.epochs, row.all ? FormatPrf(*row.all) : "-", kCell);
    for (const auto& cell : row.slices) {
      out += fmt::format("{:>{}}", cell ? FormatPrf(*cell) : "-", kCell);
    }
    out += "\n";
  }
  return out;
}

}  // namespace acrotag
