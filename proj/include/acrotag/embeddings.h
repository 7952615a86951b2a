// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Token embedding providers. Two implementations share one interface:
//
//  * EmbeddingFile reads precomputed contextual vectors keyed by document id.
//    Layout (little-endian, no padding):
//
//      "AEEM" | version u32 = 1 | dim u32
//      repeated: idLen u32 | id bytes | tokenCount u32 | tokenCount*dim f32
//
//  * HashedLookup is a trainable table over a training vocabulary plus 2^16
//    hashed rows for unseen keys.

#ifndef ACROTAG_EMBEDDINGS_H_
#define ACROTAG_EMBEDDINGS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "acrotag/random.h"
#include "acrotag/tensor.h"
#include "acrotag/tokenizer.h"

namespace acrotag {

inline constexpr char kEmbeddingMagic[4] = {'A', 'E', 'E', 'M'};
inline constexpr uint32_t kEmbeddingFormatVersion = 1;

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual size_t dim() const = 0;

  // One row per token. Implementations must be safe to call concurrently.
  virtual Matrix Embed(std::string_view doc_id,
                       std::span<const Token> tokens) const = 0;
};

class EmbeddingFile final : public EmbeddingProvider {
 public:
  // Validates the header and indexes every record. Throws FormatError for a
  // bad magic or version and CorruptionError for truncated or duplicate
  // records.
  static std::shared_ptr<EmbeddingFile> Open(const std::filesystem::path& path);

  size_t dim() const override { return dim_; }
  size_t record_count() const { return index_.size(); }
  bool Contains(std::string_view doc_id) const;

  // Throws MissingIdError for an unknown id and AlignmentError when the stored
  // token count differs from `expected_tokens`.
  Matrix Lookup(std::string_view doc_id, size_t expected_tokens) const;

  Matrix Embed(std::string_view doc_id,
               std::span<const Token> tokens) const override {
    return Lookup(doc_id, tokens.size());
  }

  // Stored token count of a record. Throws MissingIdError.
  size_t TokenCount(std::string_view doc_id) const;

  // Ids in file order.
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  struct Entry {
    uint64_t offset;  // first float
    uint32_t tokens;
  };

  EmbeddingFile() = default;
  const Entry& Find(std::string_view doc_id) const;

  std::filesystem::path path_;
  size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Entry> index_;
  mutable std::mutex mu_;
  mutable std::ifstream in_;
};

// Writes the embedding file format record by record.
class EmbeddingFileWriter {
 public:
  EmbeddingFileWriter(const std::filesystem::path& path, uint32_t dim);

  // `values` is row-major, token_count * dim floats.
  void Write(std::string_view doc_id, uint32_t token_count,
             std::span<const float> values);
  void Close();

 private:
  std::ofstream out_;
  uint32_t dim_;
};

inline constexpr size_t kOovBuckets = size_t{1} << 16;

// Lookup key of a surface form: lowercased, NFC.
std::string LookupKey(std::string_view surface);
uint64_t Fnv1a64(std::string_view bytes);

// Accumulated gradients for a subset of table rows, ordered by row.
struct SparseRowGradient {
  std::map<size_t, Vector> rows;

  void Add(size_t row, std::span<const double> grad);
  void Add(const SparseRowGradient& other);
  void Scale(double factor);
  double SquaredNorm() const;
};

struct HashedLookupParams {
  size_t dim = 0;
  size_t oov_buckets = kOovBuckets;
  std::unordered_map<std::string, size_t> vocab;  // key -> row
  Matrix table;  // (vocab.size() + oov_buckets) x dim

  // Vocabulary keys ordered by row.
  std::vector<std::string> KeysByRow() const;

  bool operator==(const HashedLookupParams&) const = default;
};

class HashedLookup final : public EmbeddingProvider {
 public:
  explicit HashedLookup(HashedLookupParams params);

  // Builds the vocabulary from the lookup keys of `training_tokens`, in sorted
  // key order, and fills the table with uniform(-1/sqrt(dim), 1/sqrt(dim)).
  static HashedLookup Build(std::span<const std::vector<Token>> training_tokens,
                            size_t dim, SplitMix64& rng,
                            size_t oov_buckets = kOovBuckets);

  size_t dim() const override { return params_.dim; }

  Matrix Embed(std::string_view doc_id,
               std::span<const Token> tokens) const override;

  size_t RowFor(std::string_view surface) const;
  std::vector<size_t> Rows(std::span<const Token> tokens) const;

  // Adds row t of `grad` (tokens x dim) to the gradient of row rows[t].
  static void Backward(std::span<const size_t> rows, const Matrix& grad,
                       SparseRowGradient& out);

  const HashedLookupParams& params() const { return params_; }
  HashedLookupParams& mutable_params() { return params_; }

 private:
  HashedLookupParams params_;
};

}  // namespace acrotag

#endif  // ACROTAG_EMBEDDINGS_H_
