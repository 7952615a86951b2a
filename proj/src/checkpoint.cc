// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/checkpoint.h"

#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "acrotag/binary_io.h"
#include "acrotag/errors.h"

namespace acrotag {
namespace {

struct NamedTensor {
  std::string name;
  std::vector<uint32_t> dims;
  std::span<double> values;
};

std::vector<NamedTensor> TensorLayout(const ModelConfig& config,
                                      TaggerParams& p, HashedLookup* lookup) {
  const auto d = static_cast<uint32_t>(config.embedding_dim);
  const auto h = static_cast<uint32_t>(config.hidden_size);
  const auto g = 4 * h;
  const auto t = static_cast<uint32_t>(config.tag_count);
  std::vector<NamedTensor> out = {
      {"lstm.fwd.w", {g, d}, p.lstm.forward.w.values()},
      {"lstm.fwd.u", {g, h}, p.lstm.forward.u.values()},
      {"lstm.fwd.b", {g}, p.lstm.forward.b},
      {"lstm.bwd.w", {g, d}, p.lstm.backward.w.values()},
      {"lstm.bwd.u", {g, h}, p.lstm.backward.u.values()},
      {"lstm.bwd.b", {g}, p.lstm.backward.b},
      {"emission.weight", {t, 2 * h}, p.emission.weight.values()},
      {"emission.bias", {t}, p.emission.bias},
      {"crf.transitions", {t, t}, p.crf.transitions.values()},
      {"crf.start", {t}, p.crf.start},
      {"crf.end", {t}, p.crf.end},
  };
  if (lookup != nullptr) {
    HashedLookupParams& lp = lookup->mutable_params();
    out.push_back({"lookup.table",
                   {static_cast<uint32_t>(lp.table.rows()), d},
                   lp.table.values()});
  }
  return out;
}

template <typename U>
U Read(std::istream& in, const std::filesystem::path& path,
       std::string_view what) {
  U value;
  if (!binary::ReadUint(in, value)) {
    throw CorruptionError(
        fmt::format("{}: truncated while reading {}", path.string(), what));
  }
  return value;
}

}  // namespace

void SaveCheckpoint(const Tagger& model, const TrainingMetadata& metadata,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  const ModelConfig& c = model.config();
  out.write(kCheckpointMagic, 4);
  binary::WriteUint(out, kCheckpointFormatVersion);
  binary::WriteUint(out, static_cast<uint32_t>(c.embedding_dim));
  binary::WriteUint(out, static_cast<uint32_t>(c.hidden_size));
  binary::WriteUint(out, static_cast<uint32_t>(c.tag_count));
  binary::WriteUint(out, static_cast<uint32_t>(c.provider));
  binary::WriteUint(out, c.seed);
  binary::WriteUint(out, metadata.epoch);
  binary::WriteFloat64(out, metadata.best_dev_macro_f1);
  if (const HashedLookup* lookup = model.lookup()) {
    binary::WriteUint(out, static_cast<uint32_t>(lookup->params().oov_buckets));
    const std::vector<std::string> keys = lookup->params().KeysByRow();
    binary::WriteUint(out, static_cast<uint32_t>(keys.size()));
    for (const std::string& key : keys) binary::WriteString(out, key);
  }
  // The layout only reads through these spans.
  Tagger& mutable_model = const_cast<Tagger&>(model);
  for (const NamedTensor& t :
       TensorLayout(c, mutable_model.mutable_params(),
                    mutable_model.mutable_lookup())) {
    binary::WriteString(out, t.name);
    binary::WriteUint(out, static_cast<uint32_t>(t.dims.size()));
    for (uint32_t dim : t.dims) binary::WriteUint(out, dim);
    for (double v : t.values) binary::WriteFloat64(out, v);
  }
  out.close();
  if (out.fail()) throw DataError(fmt::format("write failed: {}", path.string()));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path,
                          std::shared_ptr<const EmbeddingFile> file) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw FormatError(fmt::format("{}: not a checkpoint (bad magic)",
                                  path.string()));
  }
  const auto version = Read<uint32_t>(in, path, "version");
  if (version != kCheckpointFormatVersion) {
    throw FormatError(fmt::format("{}: unsupported checkpoint version {}",
                                  path.string(), version));
  }
  ModelConfig config;
  config.embedding_dim = Read<uint32_t>(in, path, "config");
  config.hidden_size = Read<uint32_t>(in, path, "config");
  config.tag_count = Read<uint32_t>(in, path, "config");
  const auto provider = Read<uint32_t>(in, path, "config");
  if (provider > 1) {
    throw CorruptionError(
        fmt::format("{}: unknown provider kind {}", path.string(), provider));
  }
  config.provider = static_cast<ProviderKind>(provider);
  config.seed = Read<uint64_t>(in, path, "config");
  TrainingMetadata metadata;
  metadata.epoch = Read<uint32_t>(in, path, "metadata");
  if (!binary::ReadFloat64(in, metadata.best_dev_macro_f1)) {
    throw CorruptionError(fmt::format("{}: truncated metadata", path.string()));
  }
  if (config.embedding_dim == 0 || config.hidden_size == 0 ||
      config.tag_count != kNumTags) {
    throw CheckpointShapeError(
        fmt::format("{}: invalid model configuration", path.string()));
  }

  std::optional<HashedLookup> lookup;
  if (config.provider == ProviderKind::kHashed) {
    HashedLookupParams lp;
    lp.dim = config.embedding_dim;
    lp.oov_buckets = Read<uint32_t>(in, path, "lookup");
    const auto vocab_size = Read<uint32_t>(in, path, "lookup");
    for (uint32_t row = 0; row < vocab_size; ++row) {
      std::string key;
      if (!binary::ReadString(in, key, 1u << 20)) {
        throw CorruptionError(
            fmt::format("{}: truncated vocabulary", path.string()));
      }
      lp.vocab.emplace(std::move(key), row);
    }
    if (lp.oov_buckets == 0 || lp.vocab.size() != vocab_size) {
      throw CorruptionError(fmt::format("{}: invalid vocabulary", path.string()));
    }
    lp.table = Matrix(lp.vocab.size() + lp.oov_buckets, lp.dim);
    lookup.emplace(std::move(lp));
  } else if (!file) {
    throw ConfigError(
        "checkpoint uses precomputed embeddings; an embedding file is required");
  } else if (file->dim() != config.embedding_dim) {
    throw DataError(fmt::format(
        "{}: model expects {}-dimensional embeddings but the file holds {}",
        path.string(), config.embedding_dim, file->dim()));
  }

  TaggerParams params;
  params.lstm = BiLstmParams::Zeros(config.embedding_dim, config.hidden_size);
  params.emission = LinearParams::Zeros(2 * config.hidden_size, kNumTags);
  params.crf = CrfParams::Zeros();
  std::vector<NamedTensor> layout =
      TensorLayout(config, params, lookup ? &*lookup : nullptr);
  std::map<std::string, NamedTensor*> by_name;
  for (NamedTensor& t : layout) by_name.emplace(t.name, &t);

  while (in.peek() != std::char_traits<char>::eof()) {
    std::string name;
    if (!binary::ReadString(in, name, 1024)) {
      throw CorruptionError(
          fmt::format("{}: truncated tensor name", path.string()));
    }
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw CorruptionError(fmt::format("{}: unexpected tensor '{}'",
                                        path.string(), name));
    }
    const NamedTensor& target = *it->second;
    const auto rank = Read<uint32_t>(in, path, name);
    std::vector<uint32_t> dims(rank);
    for (uint32_t& dim : dims) dim = Read<uint32_t>(in, path, name);
    if (dims != target.dims) {
      throw CheckpointShapeError(fmt::format(
          "{}: tensor '{}' has shape [{}], config requires [{}]", path.string(),
          name, fmt::join(dims, ", "), fmt::join(target.dims, ", ")));
    }
    for (double& v : target.values) {
      if (!binary::ReadFloat64(in, v)) {
        throw CorruptionError(fmt::format("{}: truncated tensor '{}'",
                                          path.string(), name));
      }
    }
    by_name.erase(it);
  }
  if (!by_name.empty()) {
    throw CorruptionError(fmt::format("{}: missing tensor '{}'", path.string(),
                                      by_name.begin()->first));
  }
  return {Tagger(config, std::move(params), std::move(lookup),
                 config.provider == ProviderKind::kFile ? std::move(file)
                                                        : nullptr),
          metadata};
}

}  // namespace acrotag
