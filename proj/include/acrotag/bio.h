// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// BIO tags over the two span classes and the conversions between character
// spans and per-token tags.

#ifndef ACROTAG_BIO_H_
#define ACROTAG_BIO_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acrotag/corpus.h"
#include "acrotag/tokenizer.h"

namespace acrotag {

enum class Tag : uint8_t { kO = 0, kBShort, kIShort, kBLong, kILong };
inline constexpr size_t kNumTags = 5;

std::string_view TagName(Tag tag);
std::optional<Tag> ParseTag(std::string_view name);

inline size_t TagIndex(Tag tag) { return static_cast<size_t>(tag); }

// True when `tags` is a valid BIO sequence: every I-x follows B-x or I-x.
bool IsValidBio(std::span<const Tag> tags);

// Whether `to` may follow `from` in a valid BIO sequence.
bool IsAllowedTransition(Tag from, Tag to);
// Whether a sequence may start with `tag`.
bool IsAllowedStart(Tag tag);

struct Projection {
  std::vector<Tag> tags;
  // One entry per token that overlapped both a short and a long span. Such
  // tokens are tagged as short.
  std::vector<std::string> warnings;
};

// Tags every token that overlaps a gold span by at least one character. The
// first token of each span gets B-x and the rest I-x. Tokens must be sorted
// and span lists normalized.
Projection ProjectSpans(std::span<const Token> tokens,
                        std::span<const CharSpan> short_spans,
                        std::span<const CharSpan> long_spans);

struct DecodedSpans {
  std::vector<CharSpan> short_spans;
  std::vector<CharSpan> long_spans;
};

// Turns maximal B-x I-x* runs into spans. An I-x without a B-x or I-x of the
// same class before it starts a new span.
DecodedSpans DecodeTags(std::span<const Token> tokens, std::span<const Tag> tags);

struct TaggedSentence {
  std::string doc_id;
  std::vector<Token> tokens;
  std::vector<Tag> tags;
  Language language = Language::kEn;
  Domain domain = Domain::kScientific;
};

// Tokenizes a document and projects its gold spans onto the tokens. Warnings
// from the projection are appended to `warnings` when it is given.
TaggedSentence MakeTaggedSentence(const Document& doc,
                                  std::vector<std::string>* warnings = nullptr);

}  // namespace acrotag

#endif  // ACROTAG_BIO_H_
