// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Run configuration files: one `key = value` per line, `#` starts a comment.
// Relative paths are resolved against the directory of the config file.
//
//   train, dev          corpus files
//   out                 output directory
//   provider            hashed | file
//   embeddings          embedding file (file provider)
//   embeddings.<tag>    embedding file for a pretraining-epoch tag (grid)
//   embedding_dim, hidden_size, seed
//   epochs, learning_rate, batch_size, patience, clip_norm, dropout
//   adam_beta1, adam_beta2, adam_epsilon
//   mode                joint | per-language
//   threads             OpenMP threads, 0 for the runtime default
//   grid.modes          comma-separated modes
//   grid.epoch_tags     comma-separated pretraining-epoch tags

#ifndef ACROTAG_RUN_CONFIG_H_
#define ACROTAG_RUN_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acrotag/model.h"
#include "acrotag/trainer.h"

namespace acrotag {

struct RunConfig {
  std::filesystem::path train;
  std::filesystem::path dev;
  std::filesystem::path embeddings;
  std::filesystem::path out;
  ModelConfig model;
  TrainConfig training;
  GridSpec grid;
  int threads = 0;
};

// Parses `key = value` lines in order. Throws ConfigError for lines without
// '=' or with an empty key.
std::vector<std::pair<std::string, std::string>> ParseKeyValues(
    std::string_view text);

// Applies one setting. Throws ConfigError naming the key when it is unknown
// or its value does not parse. Paths are resolved against `base_dir`.
void ApplySetting(RunConfig& config, std::string_view key,
                  std::string_view value,
                  const std::filesystem::path& base_dir = {});

RunConfig ParseRunConfig(std::string_view text,
                         const std::filesystem::path& base_dir = {});
RunConfig LoadRunConfig(const std::filesystem::path& path);

}  // namespace acrotag

#endif  // ACROTAG_RUN_CONFIG_H_
