// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/run_config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "acrotag/errors.h"

namespace acrotag {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(fmt::format("key '{}': cannot parse '{}'", key, value));
  }
  return out;
}

std::vector<std::string_view> SplitList(std::string_view value) {
  std::vector<std::string_view> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const std::string_view item = Trim(value.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              std::string_view value) {
  std::filesystem::path p{std::string(value)};
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> ParseKeyValues(
    std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{}
                                             : text.substr(newline + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || Trim(line.substr(0, eq)).empty()) {
      throw ConfigError(
          fmt::format("config line {}: expected 'key = value'", line_no));
    }
    out.emplace_back(std::string(Trim(line.substr(0, eq))),
                     std::string(Trim(line.substr(eq + 1))));
  }
  return out;
}

void ApplySetting(RunConfig& c, std::string_view key, std::string_view value,
                  const std::filesystem::path& base_dir) {
  auto size = [&] { return ParseNumber<size_t>(key, value); };
  auto real = [&] { return ParseNumber<double>(key, value); };
  if (key == "train") {
    c.train = Resolve(base_dir, value);
  } else if (key == "dev") {
    c.dev = Resolve(base_dir, value);
  } else if (key == "out") {
    c.out = Resolve(base_dir, value);
  } else if (key == "embeddings") {
    c.embeddings = Resolve(base_dir, value);
  } else if (key.starts_with("embeddings.") && key.size() > 11) {
    c.grid.embeddings[std::string(key.substr(11))] = Resolve(base_dir, value);
  } else if (key == "provider") {
    if (value == "hashed") {
      c.model.provider = ProviderKind::kHashed;
    } else if (value == "file") {
      c.model.provider = ProviderKind::kFile;
    } else {
      throw ConfigError(fmt::format("key 'provider': unknown value '{}'", value));
    }
  } else if (key == "embedding_dim") {
    c.model.embedding_dim = size();
  } else if (key == "hidden_size") {
    c.model.hidden_size = size();
  } else if (key == "seed") {
    c.model.seed = ParseNumber<uint64_t>(key, value);
    c.training.seed = c.model.seed;
  } else if (key == "epochs") {
    c.training.epochs = size();
  } else if (key == "learning_rate") {
    c.training.learning_rate = real();
  } else if (key == "batch_size") {
    c.training.batch_size = size();
  } else if (key == "patience") {
    c.training.patience = size();
  } else if (key == "clip_norm") {
    c.training.clip_norm = real();
  } else if (key == "dropout") {
    c.training.dropout = real();
  } else if (key == "adam_beta1") {
    c.training.beta1 = real();
  } else if (key == "adam_beta2") {
    c.training.beta2 = real();
  } else if (key == "adam_epsilon") {
    c.training.epsilon = real();
  } else if (key == "mode") {
    auto mode = ParseMode(value);
    if (!mode) throw ConfigError(fmt::format("key 'mode': unknown value '{}'", value));
    c.training.mode = *mode;
  } else if (key == "threads") {
    c.threads = ParseNumber<int>(key, value);
  } else if (key == "grid.modes") {
    c.grid.modes.clear();
    for (std::string_view item : SplitList(value)) {
      auto mode = ParseMode(item);
      if (!mode) {
        throw ConfigError(fmt::format("key 'grid.modes': unknown mode '{}'", item));
      }
      c.grid.modes.push_back(*mode);
    }
  } else if (key == "grid.epoch_tags") {
    c.grid.epoch_tags.clear();
    for (std::string_view item : SplitList(value)) {
      c.grid.epoch_tags.emplace_back(item);
    }
  } else {
    throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
}

RunConfig ParseRunConfig(std::string_view text,
                         const std::filesystem::path& base_dir) {
  RunConfig config;
  for (const auto& [key, value] : ParseKeyValues(text)) {
    ApplySetting(config, key, value, base_dir);
  }
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open config {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseRunConfig(buffer.str(), path.parent_path());
}

}  // namespace acrotag
