// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Checkpoint file, little-endian throughout:
//
//   "AECK" | version u32
//   config:   embeddingDim u32 | hiddenSize u32 | tagCount u32 |
//             provider u32 (0 file, 1 hashed) | seed u64 |
//             epoch u32 | bestDevMacroF1 f64 |
//             [hashed only] oovBuckets u32 | vocabSize u32 |
//                           vocabSize x (keyLen u32 | key bytes), in row order
//   repeated: nameLen u32 | name | rank u32 | dims u32... | f64 payload

#ifndef ACROTAG_CHECKPOINT_H_
#define ACROTAG_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <memory>

#include "acrotag/embeddings.h"
#include "acrotag/model.h"

namespace acrotag {

inline constexpr char kCheckpointMagic[4] = {'A', 'E', 'C', 'K'};
inline constexpr uint32_t kCheckpointFormatVersion = 1;

struct TrainingMetadata {
  uint32_t epoch = 0;
  double best_dev_macro_f1 = 0.0;

  bool operator==(const TrainingMetadata&) const = default;
};

struct Checkpoint {
  Tagger model;
  TrainingMetadata metadata;
};

void SaveCheckpoint(const Tagger& model, const TrainingMetadata& metadata,
                    const std::filesystem::path& path);

// `file` is required for checkpoints of file-provider models and ignored
// otherwise. Throws FormatError (magic/version), CorruptionError (truncation,
// unknown or missing tensors) and CheckpointShapeError.
Checkpoint LoadCheckpoint(const std::filesystem::path& path,
                          std::shared_ptr<const EmbeddingFile> file = nullptr);

}  // namespace acrotag

#endif  // ACROTAG_CHECKPOINT_H_
