// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/embeddings.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include <fmt/format.h>

#include "acrotag/binary_io.h"
#include "acrotag/errors.h"
#include "acrotag/unicode.h"

namespace acrotag {

std::shared_ptr<EmbeddingFile> EmbeddingFile::Open(
    const std::filesystem::path& path) {
  std::shared_ptr<EmbeddingFile> file(new EmbeddingFile());
  file->path_ = path;
  file->in_.open(path, std::ios::binary);
  std::ifstream& in = file->in_;
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  in.seekg(0, std::ios::end);
  const uint64_t size = static_cast<uint64_t>(in.tellg());
  in.seekg(0);

  char magic[4];
  uint32_t version = 0;
  uint32_t dim = 0;
  if (!in.read(magic, 4) || std::memcmp(magic, kEmbeddingMagic, 4) != 0) {
    throw FormatError(fmt::format("{}: not an embedding file (bad magic)",
                                  path.string()));
  }
  if (!binary::ReadUint(in, version) || version != kEmbeddingFormatVersion) {
    throw FormatError(fmt::format("{}: unsupported format version {}",
                                  path.string(), version));
  }
  if (!binary::ReadUint(in, dim) || dim == 0) {
    throw FormatError(fmt::format("{}: invalid dimension", path.string()));
  }
  file->dim_ = dim;

  uint64_t offset = 12;
  while (offset < size) {
    const uint64_t record_start = offset;
    auto corrupt = [&](std::string_view what) {
      return CorruptionError(fmt::format("{}: {} in record at offset {}",
                                         path.string(), what, record_start));
    };
    std::string id;
    if (!binary::ReadString(in, id, static_cast<uint32_t>(size - offset))) {
      throw corrupt("truncated id");
    }
    uint32_t tokens = 0;
    if (!binary::ReadUint(in, tokens)) throw corrupt("truncated token count");
    offset += 4 + id.size() + 4;
    const uint64_t payload = uint64_t{tokens} * dim * 4;
    if (payload > size - offset) throw corrupt("truncated matrix");
    if (!file->index_.emplace(id, Entry{offset, tokens}).second) {
      throw corrupt(fmt::format("duplicate id '{}'", id));
    }
    file->ids_.push_back(std::move(id));
    offset += payload;
    in.seekg(static_cast<std::streamoff>(offset));
  }
  in.clear();
  return file;
}

const EmbeddingFile::Entry& EmbeddingFile::Find(std::string_view doc_id) const {
  auto it = index_.find(std::string(doc_id));
  if (it == index_.end()) {
    throw MissingIdError(fmt::format("{}: no embeddings for document '{}'",
                                     path_.string(), doc_id));
  }
  return it->second;
}

bool EmbeddingFile::Contains(std::string_view doc_id) const {
  return index_.count(std::string(doc_id)) > 0;
}

size_t EmbeddingFile::TokenCount(std::string_view doc_id) const {
  return Find(doc_id).tokens;
}

Matrix EmbeddingFile::Lookup(std::string_view doc_id,
                             size_t expected_tokens) const {
  const Entry& entry = Find(doc_id);
  if (entry.tokens != expected_tokens) {
    throw AlignmentError(fmt::format(
        "document '{}': embedding file has {} tokens, tokenizer produced {}",
        doc_id, entry.tokens, expected_tokens));
  }
  std::vector<unsigned char> bytes(size_t{entry.tokens} * dim_ * 4);
  {
    std::lock_guard<std::mutex> lock(mu_);
    in_.seekg(static_cast<std::streamoff>(entry.offset));
    if (!in_.read(reinterpret_cast<char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()))) {
      in_.clear();
      throw CorruptionError(fmt::format("{}: short read at offset {}",
                                        path_.string(), entry.offset));
    }
  }
  Matrix out(entry.tokens, dim_);
  std::span<double> values = out.values();
  for (size_t i = 0; i < values.size(); ++i) {
    values[i] = binary::DecodeFloat32(bytes.data() + 4 * i);
  }
  return out;
}

EmbeddingFileWriter::EmbeddingFileWriter(const std::filesystem::path& path,
                                         uint32_t dim)
    : out_(path, std::ios::binary | std::ios::trunc), dim_(dim) {
  if (!out_) throw DataError(fmt::format("cannot write {}", path.string()));
  if (dim == 0) throw ShapeError("embedding dimension must be positive");
  out_.write(kEmbeddingMagic, 4);
  binary::WriteUint(out_, kEmbeddingFormatVersion);
  binary::WriteUint(out_, dim);
}

void EmbeddingFileWriter::Write(std::string_view doc_id, uint32_t token_count,
                                std::span<const float> values) {
  if (values.size() != size_t{token_count} * dim_) {
    throw ShapeError(fmt::format("record '{}': {} values for {} x {}", doc_id,
                                 values.size(), token_count, dim_));
  }
  binary::WriteString(out_, doc_id);
  binary::WriteUint(out_, token_count);
  for (float v : values) binary::WriteFloat32(out_, v);
}

void EmbeddingFileWriter::Close() {
  out_.close();
  if (out_.fail()) throw DataError("embedding file write failed");
}

std::string LookupKey(std::string_view surface) { return LowercaseNfc(surface); }

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

void SparseRowGradient::Add(size_t row, std::span<const double> grad) {
  auto [it, inserted] = rows.try_emplace(row, grad.begin(), grad.end());
  if (!inserted) AddScaled(it->second, grad);
}

void SparseRowGradient::Add(const SparseRowGradient& other) {
  for (const auto& [row, grad] : other.rows) Add(row, grad);
}

void SparseRowGradient::Scale(double factor) {
  for (auto& [row, grad] : rows) ScaleInPlace(grad, factor);
}

double SparseRowGradient::SquaredNorm() const {
  double sum = 0.0;
  for (const auto& [row, grad] : rows) sum += acrotag::SquaredNorm(grad);
  return sum;
}

std::vector<std::string> HashedLookupParams::KeysByRow() const {
  std::vector<std::string> keys(vocab.size());
  for (const auto& [key, row] : vocab) keys.at(row) = key;
  return keys;
}

HashedLookup::HashedLookup(HashedLookupParams params)
    : params_(std::move(params)) {
  if (params_.dim == 0 || params_.oov_buckets == 0 ||
      params_.table.rows() != params_.vocab.size() + params_.oov_buckets ||
      params_.table.cols() != params_.dim) {
    throw ShapeError("HashedLookup: table shape does not match vocabulary");
  }
}

HashedLookup HashedLookup::Build(
    std::span<const std::vector<Token>> training_tokens, size_t dim,
    SplitMix64& rng, size_t oov_buckets) {
  std::set<std::string> keys;
  for (const auto& tokens : training_tokens) {
    for (const Token& token : tokens) keys.insert(LookupKey(token.surface));
  }
  HashedLookupParams params;
  params.dim = dim;
  params.oov_buckets = oov_buckets;
  for (const std::string& key : keys) params.vocab.emplace(key, params.vocab.size());
  params.table = Matrix(params.vocab.size() + oov_buckets, dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& v : params.table.values()) v = rng.Uniform(-scale, scale);
  return HashedLookup(std::move(params));
}

size_t HashedLookup::RowFor(std::string_view surface) const {
  const std::string key = LookupKey(surface);
  auto it = params_.vocab.find(key);
  if (it != params_.vocab.end()) return it->second;
  return params_.vocab.size() + Fnv1a64(key) % params_.oov_buckets;
}

std::vector<size_t> HashedLookup::Rows(std::span<const Token> tokens) const {
  std::vector<size_t> rows;
  rows.reserve(tokens.size());
  for (const Token& token : tokens) rows.push_back(RowFor(token.surface));
  return rows;
}

Matrix HashedLookup::Embed(std::string_view /*doc_id*/,
                           std::span<const Token> tokens) const {
  Matrix out(tokens.size(), params_.dim);
  for (size_t t = 0; t < tokens.size(); ++t) {
    std::span<const double> row = params_.table.row(RowFor(tokens[t].surface));
    std::copy(row.begin(), row.end(), out.row(t).begin());
  }
  return out;
}

void HashedLookup::Backward(std::span<const size_t> rows, const Matrix& grad,
                            SparseRowGradient& out) {
  if (grad.rows() != rows.size()) {
    throw ShapeError("HashedLookup::Backward: row count mismatch");
  }
  for (size_t t = 0; t < rows.size(); ++t) out.Add(rows[t], grad.row(t));
}

}  // namespace acrotag
