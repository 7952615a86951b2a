// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/bio.h"

#include <array>

#include <fmt/format.h>

#include "acrotag/errors.h"

namespace acrotag {
namespace {

constexpr std::array<std::string_view, kNumTags> kTagNames = {
    "O", "B-short", "I-short", "B-long", "I-long"};

enum class SpanClass { kNone, kShort, kLong };

SpanClass ClassOf(Tag tag) {
  switch (tag) {
    case Tag::kBShort:
    case Tag::kIShort:
      return SpanClass::kShort;
    case Tag::kBLong:
    case Tag::kILong:
      return SpanClass::kLong;
    case Tag::kO:
      break;
  }
  return SpanClass::kNone;
}

bool IsInside(Tag tag) { return tag == Tag::kIShort || tag == Tag::kILong; }

// Index of the first span in `spans` overlapping `token`, if any.
std::optional<size_t> FirstOverlap(const CharSpan& token,
                                   std::span<const CharSpan> spans) {
  for (size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].start >= token.end) break;
    if (spans[i].Overlaps(token)) return i;
  }
  return std::nullopt;
}

}  // namespace

std::string_view TagName(Tag tag) { return kTagNames[TagIndex(tag)]; }

std::optional<Tag> ParseTag(std::string_view name) {
  for (size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == name) return static_cast<Tag>(i);
  }
  return std::nullopt;
}

bool IsAllowedTransition(Tag from, Tag to) {
  if (!IsInside(to)) return true;
  return ClassOf(from) == ClassOf(to);
}

bool IsAllowedStart(Tag tag) { return !IsInside(tag); }

bool IsValidBio(std::span<const Tag> tags) {
  for (size_t t = 0; t < tags.size(); ++t) {
    if (t == 0 ? !IsAllowedStart(tags[t])
               : !IsAllowedTransition(tags[t - 1], tags[t])) {
      return false;
    }
  }
  return true;
}

Projection ProjectSpans(std::span<const Token> tokens,
                        std::span<const CharSpan> short_spans,
                        std::span<const CharSpan> long_spans) {
  Projection out;
  out.tags.assign(tokens.size(), Tag::kO);
  // Owning span of the previous token as (class, index).
  SpanClass prev_class = SpanClass::kNone;
  size_t prev_index = 0;
  for (size_t t = 0; t < tokens.size(); ++t) {
    const CharSpan& span = tokens[t].span;
    const auto short_hit = FirstOverlap(span, short_spans);
    const auto long_hit = FirstOverlap(span, long_spans);
    SpanClass cls = SpanClass::kNone;
    size_t index = 0;
    if (short_hit) {
      cls = SpanClass::kShort;
      index = *short_hit;
      if (long_hit) {
        out.warnings.push_back(fmt::format(
            "token {} '{}' [{}, {}] overlaps a short and a long span; "
            "tagged short",
            t, tokens[t].surface, span.start, span.end));
      }
    } else if (long_hit) {
      cls = SpanClass::kLong;
      index = *long_hit;
    }
    if (cls != SpanClass::kNone) {
      const bool continues = prev_class == cls && prev_index == index;
      if (cls == SpanClass::kShort) {
        out.tags[t] = continues ? Tag::kIShort : Tag::kBShort;
      } else {
        out.tags[t] = continues ? Tag::kILong : Tag::kBLong;
      }
    }
    prev_class = cls;
    prev_index = index;
  }
  return out;
}

DecodedSpans DecodeTags(std::span<const Token> tokens,
                        std::span<const Tag> tags) {
  if (tokens.size() != tags.size()) {
    throw ShapeError(fmt::format("DecodeTags: {} tokens but {} tags",
                                 tokens.size(), tags.size()));
  }
  DecodedSpans out;
  SpanClass open = SpanClass::kNone;
  CharSpan current;
  auto close = [&] {
    if (open == SpanClass::kShort) out.short_spans.push_back(current);
    if (open == SpanClass::kLong) out.long_spans.push_back(current);
    open = SpanClass::kNone;
  };
  for (size_t t = 0; t < tags.size(); ++t) {
    const SpanClass cls = ClassOf(tags[t]);
    if (cls != SpanClass::kNone && IsInside(tags[t]) && cls == open) {
      current.end = tokens[t].span.end;
      continue;
    }
    close();
    if (cls != SpanClass::kNone) {
      open = cls;
      current = tokens[t].span;
    }
  }
  close();
  return out;
}

TaggedSentence MakeTaggedSentence(const Document& doc,
                                  std::vector<std::string>* warnings) {
  TaggedSentence sentence;
  sentence.doc_id = doc.id;
  sentence.language = doc.language;
  sentence.domain = doc.domain;
  sentence.tokens = Tokenize(doc.text);
  Projection projection =
      ProjectSpans(sentence.tokens, doc.short_spans, doc.long_spans);
  sentence.tags = std::move(projection.tags);
  if (warnings != nullptr) {
    for (std::string& w : projection.warnings) {
      warnings->push_back(fmt::format("document '{}': {}", doc.id, w));
    }
  }
  return sentence;
}

}  // namespace acrotag
