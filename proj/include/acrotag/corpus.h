// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Documents, character spans and the canonical corpus file. A corpus file is
// a UTF-8 JSON array of records:
//
//   {"id": "...", "text": "...", "language": "en", "domain": "legal",
//    "short": [[start, end], ...], "long": [[start, end], ...]}
//
// Offsets count Unicode scalar values; `end` is exclusive. Prediction files
// use the same layout with predicted spans in place of gold ones.

#ifndef ACROTAG_CORPUS_H_
#define ACROTAG_CORPUS_H_

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace acrotag {

struct CharSpan {
  size_t start = 0;
  size_t end = 0;  // exclusive

  size_t length() const { return end - start; }
  bool Overlaps(const CharSpan& other) const {
    return start < other.end && other.start < end;
  }
  auto operator<=>(const CharSpan&) const = default;
};

enum class Language { kDa, kEn, kFr, kEs, kFa, kVi };
enum class Domain { kScientific, kLegal };

// The seven language/domain slices of the task corpus, in report order.
enum class Slice { kDa, kEnSci, kEnLeg, kFr, kFa, kEs, kVi };
inline constexpr size_t kNumSlices = 7;
inline constexpr std::array<Slice, kNumSlices> kAllSlices = {
    Slice::kDa, Slice::kEnSci, Slice::kEnLeg, Slice::kFr,
    Slice::kFa, Slice::kEs,    Slice::kVi};

std::string_view LanguageName(Language language);
std::string_view DomainName(Domain domain);
std::string_view SliceName(Slice slice);
std::optional<Language> ParseLanguage(std::string_view name);
std::optional<Domain> ParseDomain(std::string_view name);
std::optional<Slice> ParseSlice(std::string_view name);

// The slice of a (language, domain) pair, or nullopt if the corpus has no
// such slice (for example Danish scientific text).
std::optional<Slice> SliceOf(Language language, Domain domain);

struct Document {
  std::string id;
  std::string text;  // UTF-8
  Language language = Language::kEn;
  Domain domain = Domain::kScientific;
  std::vector<CharSpan> short_spans;
  std::vector<CharSpan> long_spans;

  Slice slice() const { return *SliceOf(language, domain); }
};

// Sorts spans and merges overlapping ones.
std::vector<CharSpan> NormalizeSpans(std::vector<CharSpan> spans);

// Checks span bounds against the text and normalizes both span lists.
// Throws DataError naming the document and the offending span.
void ValidateAndNormalize(Document& doc);

// Parses a corpus from JSON text. Errors name the record index and field.
std::vector<Document> ParseCorpus(std::string_view json_text);
std::vector<Document> LoadCorpus(const std::filesystem::path& path);

std::string SerializeCorpus(const std::vector<Document>& docs);
void SaveCorpus(const std::vector<Document>& docs,
                const std::filesystem::path& path);

// Converts a shared-task release file (records with "ID", "text",
// "acronyms" and "long-forms") into canonical documents. The release does not
// carry language and domain per record, so they are supplied by the caller.
std::vector<Document> ParseSharedTaskRelease(std::string_view json_text,
                                             Language language, Domain domain);

// Documents of `docs` that belong to `slice`.
std::vector<Document> FilterSlice(const std::vector<Document>& docs,
                                  Slice slice);

}  // namespace acrotag

#endif  // ACROTAG_CORPUS_H_
