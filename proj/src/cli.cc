// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/cli.h"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "acrotag/checkpoint.h"
#include "acrotag/corpus.h"
#include "acrotag/embeddings.h"
#include "acrotag/errors.h"
#include "acrotag/kernels.h"
#include "acrotag/run_config.h"
#include "acrotag/scorer.h"
#include "acrotag/tokenizer.h"
#include "acrotag/trainer.h"

namespace acrotag {
namespace {

namespace fs = std::filesystem;

// Flags shared by train and grid; they override the config file.
struct RunOverrides {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> provider;
  std::optional<std::string> embeddings;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void AddRunFlags(CLI::App* cmd, RunOverrides& o) {
  cmd->add_option("--config", o.config, "Run configuration file")
      ->required();
  cmd->add_option("--seed", o.seed, "Seed for initialization and shuffling");
  cmd->add_option("--mode", o.mode, "Experiment mode: joint | per-language");
  cmd->add_option("--provider", o.provider, "Embedding provider: file | hashed");
  cmd->add_option("--embeddings", o.embeddings,
                  "Embedding file for the file provider");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--threads", o.threads, "OpenMP threads (0: runtime default)");
}

RunConfig ResolveRunConfig(const RunOverrides& o) {
  RunConfig config = LoadRunConfig(o.config);
  if (o.seed) ApplySetting(config, "seed", std::to_string(*o.seed));
  if (o.mode) ApplySetting(config, "mode", *o.mode);
  if (o.provider) ApplySetting(config, "provider", *o.provider);
  if (o.embeddings) config.embeddings = *o.embeddings;
  if (o.out) config.out = *o.out;
  if (o.threads) config.threads = *o.threads;
  return config;
}

void RequireParentDirectory(const fs::path& path) {
  const fs::path parent = path.has_parent_path() ? path.parent_path() : ".";
  if (!fs::is_directory(parent)) {
    throw DataError(
        fmt::format("output directory {} does not exist", parent.string()));
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw DataError(fmt::format("write failed: {}", path.string()));
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::shared_ptr<const EmbeddingFile> OpenEmbeddingsIfNeeded(
    const RunConfig& config) {
  if (config.model.provider != ProviderKind::kFile) return nullptr;
  if (config.embeddings.empty()) {
    throw ConfigError("provider 'file' requires 'embeddings'");
  }
  return EmbeddingFile::Open(config.embeddings);
}

ExitStatus Convert(const std::string& in, const std::string& out,
                   const std::string& language, const std::string& domain,
                   std::ostream& err) {
  const auto lang = ParseLanguage(language);
  const auto dom = ParseDomain(domain);
  if (!lang || !dom) {
    throw ConfigError(
        fmt::format("unknown language/domain '{}'/'{}'", language, domain));
  }
  const std::vector<Document> docs =
      ParseSharedTaskRelease(ReadText(in), *lang, *dom);
  RequireParentDirectory(out);
  SaveCorpus(docs, out);
  err << fmt::format("converted {} records from {} to {}\n", docs.size(), in,
                     out);
  return ExitStatus::kOk;
}

ExitStatus Train(const RunOverrides& overrides, std::ostream& out,
                 std::ostream& err) {
  RunConfig config = ResolveRunConfig(overrides);
  config.training.Validate();
  if (config.train.empty()) throw ConfigError("config must set 'train'");
  if (config.out.empty()) throw ConfigError("config must set 'out' (or --out)");
  kernels::SetThreadCount(config.threads);
  const std::vector<Document> train = LoadCorpus(config.train);
  const std::vector<Document> dev =
      config.dev.empty() ? std::vector<Document>{} : LoadCorpus(config.dev);
  auto file = OpenEmbeddingsIfNeeded(config);
  if (!fs::is_directory(config.out) && !fs::create_directories(config.out)) {
    throw DataError(fmt::format("cannot create {}", config.out.string()));
  }
  std::vector<std::string> warnings;
  PrepareSentences(train, &warnings);
  for (const std::string& w : warnings) err << "warning: " << w << "\n";

  const fs::path metrics_path = config.out / "metrics.jsonl";
  std::ofstream metrics(metrics_path, std::ios::binary | std::ios::trunc);
  if (!metrics) throw DataError(fmt::format("cannot write {}", metrics_path.string()));
  err << fmt::format("training on {} documents ({} dev), mode {}\n",
                     train.size(), dev.size(), ModeName(config.training.mode));
  auto on_epoch = [&](const EpochReport& r) {
    metrics << EpochReportToJson(r).dump() << "\n";
    metrics.flush();
    err << fmt::format("[{}] epoch {} mean_nll {:.6f}", r.model, r.epoch,
                       r.mean_nll);
    if (r.overall) err << fmt::format(" dev macro-F1 {:.4f}", r.overall->f1);
    err << "\n";
  };
  const std::vector<TrainedModel> models =
      TrainExperiment(train, dev, config.model, config.training, file, on_epoch);

  for (const TrainedModel& m : models) {
    const fs::path ckpt =
        config.out / (config.training.mode == ExperimentMode::kJoint
                          ? std::string("model.ckpt")
                          : fmt::format("model.{}.ckpt", m.label));
    SaveCheckpoint(m.result.best, m.result.metadata, ckpt);
    err << fmt::format("saved {} (epoch {})\n", ckpt.string(),
                       m.result.metadata.epoch);
    if (dev.empty()) continue;
    const std::vector<Document> scope =
        config.training.mode == ExperimentMode::kJoint
            ? dev
            : FilterSlice(dev, *ParseSlice(m.label));
    if (scope.empty()) continue;
    out << "model " << m.label << " dev scores:\n"
        << FormatSliceReport(Evaluate(m.result.best, scope));
  }
  return ExitStatus::kOk;
}

ExitStatus Grid(const RunOverrides& overrides, std::ostream& out,
                std::ostream& err) {
  RunConfig config = ResolveRunConfig(overrides);
  config.training.Validate();
  if (config.train.empty()) throw ConfigError("config must set 'train'");
  kernels::SetThreadCount(config.threads);
  if (!config.embeddings.empty() && config.grid.epoch_tags.empty()) {
    config.grid.epoch_tags = {"-"};
    config.grid.embeddings["-"] = config.embeddings;
  }
  const std::vector<Document> train = LoadCorpus(config.train);
  const std::vector<Document> dev =
      config.dev.empty() ? std::vector<Document>{} : LoadCorpus(config.dev);
  err << fmt::format("grid over {} modes\n", config.grid.modes.size());
  const std::string table = FormatGridTable(
      RunExperimentGrid(train, dev, config.grid, config.model, config.training));
  out << table;
  if (!config.out.empty()) {
    fs::create_directories(config.out);
    WriteText(config.out / "grid.txt", table);
  }
  return ExitStatus::kOk;
}

ExitStatus Predict(const std::string& checkpoint, const std::string& corpus,
                   const std::string& out_path,
                   const std::optional<std::string>& embeddings,
                   std::optional<int> threads, std::ostream& err) {
  kernels::SetThreadCount(threads.value_or(0));
  std::shared_ptr<const EmbeddingFile> file;
  if (embeddings) file = EmbeddingFile::Open(*embeddings);
  const Checkpoint loaded = LoadCheckpoint(checkpoint, file);
  const std::vector<Document> docs = LoadCorpus(corpus);
  RequireParentDirectory(out_path);
  SaveCorpus(PredictAll(loaded.model, docs), out_path);
  err << fmt::format("wrote predictions for {} documents to {}\n", docs.size(),
                     out_path);
  return ExitStatus::kOk;
}

ExitStatus Score(const std::string& pred_path, const std::string& gold_path,
                 const std::optional<std::string>& report_path,
                 std::ostream& out) {
  const SliceReport report =
      ScoreBySlice(LoadCorpus(pred_path), LoadCorpus(gold_path));
  out << FormatSliceReport(report);
  if (report_path) {
    RequireParentDirectory(*report_path);
    WriteText(*report_path, SliceReportToJson(report).dump(2) + "\n");
  }
  return ExitStatus::kOk;
}

ExitStatus TokenizeCorpus(const std::string& corpus, const std::string& out_path) {
  nlohmann::json root = nlohmann::json::array();
  for (const Document& doc : LoadCorpus(corpus)) {
    nlohmann::json tokens = nlohmann::json::array();
    for (const Token& t : Tokenize(doc.text)) {
      tokens.push_back({t.span.start, t.span.end});
    }
    root.push_back({{"id", doc.id}, {"tokens", std::move(tokens)}});
  }
  RequireParentDirectory(out_path);
  WriteText(out_path, root.dump() + "\n");
  return ExitStatus::kOk;
}

ExitStatus CheckEmbeddings(const std::string& corpus,
                           const std::string& embeddings, std::ostream& out) {
  const auto file = EmbeddingFile::Open(embeddings);
  size_t bad = 0;
  const std::vector<Document> docs = LoadCorpus(corpus);
  for (const Document& doc : docs) {
    const size_t expected = Tokenize(doc.text).size();
    if (!file->Contains(doc.id)) {
      out << fmt::format("missing: '{}'\n", doc.id);
      ++bad;
    } else if (file->TokenCount(doc.id) != expected) {
      out << fmt::format("misaligned: '{}' has {} rows, tokenizer gives {}\n",
                         doc.id, file->TokenCount(doc.id), expected);
      ++bad;
    }
  }
  out << fmt::format("{} documents, {} problems, dim {}\n", docs.size(), bad,
                     file->dim());
  if (bad > 0) {
    throw AlignmentError(fmt::format("{} documents fail the alignment check", bad));
  }
  return ExitStatus::kOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Acronym and long-form extraction with a BiLSTM-CRF tagger",
               "acrotag"};
  app.require_subcommand(1);

  std::string convert_in, convert_out, language, domain;
  auto* convert = app.add_subcommand(
      "convert", "Convert a shared-task release file to the corpus format");
  convert->add_option("input", convert_in, "Release file")->required();
  convert->add_option("--out", convert_out, "Output corpus file")->required();
  convert->add_option("--language", language, "da | en | fr | es | fa | vi")
      ->required();
  convert->add_option("--domain", domain, "scientific | legal")->required();

  RunOverrides train_flags;
  auto* train = app.add_subcommand(
      "train", "Train a tagger; writes checkpoints and metrics.jsonl to --out");
  AddRunFlags(train, train_flags);

  RunOverrides grid_flags;
  auto* grid = app.add_subcommand(
      "grid", "Train every mode x pretraining tag and print a dev table");
  AddRunFlags(grid, grid_flags);

  std::string checkpoint, predict_corpus, predict_out;
  std::optional<std::string> predict_embeddings;
  std::optional<int> predict_threads;
  auto* predict = app.add_subcommand("predict", "Tag a corpus with a checkpoint");
  predict->add_option("checkpoint", checkpoint, "Checkpoint file")->required();
  predict->add_option("corpus", predict_corpus, "Corpus file")->required();
  predict->add_option("--out", predict_out, "Prediction file")->required();
  predict->add_option("--embeddings", predict_embeddings,
                      "Embedding file (file-provider checkpoints)");
  predict->add_option("--threads", predict_threads, "OpenMP threads");

  std::string pred_path, gold_path;
  std::optional<std::string> report_path;
  auto* score = app.add_subcommand("score", "Score predictions against gold");
  score->add_option("predictions", pred_path, "Prediction file")->required();
  score->add_option("gold", gold_path, "Gold corpus file")->required();
  score->add_option("--out", report_path, "Write the report as JSON");

  std::string tokenize_corpus, tokenize_out;
  auto* tokenize = app.add_subcommand(
      "tokenize", "Write token offsets of every document as JSON");
  tokenize->add_option("corpus", tokenize_corpus, "Corpus file")->required();
  tokenize->add_option("--out", tokenize_out, "Output file")->required();

  std::string check_corpus, check_embeddings;
  auto* check = app.add_subcommand(
      "check-embeddings",
      "Verify an embedding file covers a corpus with matching token counts");
  check->add_option("corpus", check_corpus, "Corpus file")->required();
  check->add_option("--embeddings", check_embeddings, "Embedding file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitStatus::kUsage);
  }

  ExitStatus status = ExitStatus::kOk;
  try {
    if (*convert) {
      status = Convert(convert_in, convert_out, language, domain, err);
    } else if (*train) {
      status = Train(train_flags, out, err);
    } else if (*grid) {
      status = Grid(grid_flags, out, err);
    } else if (*predict) {
      status = Predict(checkpoint, predict_corpus, predict_out,
                       predict_embeddings, predict_threads, err);
    } else if (*score) {
      status = Score(pred_path, gold_path, report_path, out);
    } else if (*tokenize) {
      status = TokenizeCorpus(tokenize_corpus, tokenize_out);
    } else if (*check) {
      status = CheckEmbeddings(check_corpus, check_embeddings, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitStatus::kUsage);
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitStatus::kData);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitStatus::kRuntime);
  }
  return static_cast<int>(status);
}

}  // namespace acrotag
