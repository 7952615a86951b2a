// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "acrotag/errors.h"
#include "acrotag/unicode.h"

namespace acrotag {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 6> kLanguageNames = {"da", "en", "fr",
                                                            "es", "fa", "vi"};
constexpr std::array<std::string_view, 2> kDomainNames = {"scientific",
                                                          "legal"};
constexpr std::array<std::string_view, kNumSlices> kSliceNames = {
    "da", "en-sci", "en-leg", "fr", "fa", "es", "vi"};

[[noreturn]] void RecordError(size_t index, std::string_view field,
                              std::string_view what) {
  throw DataError(fmt::format("record {}: field '{}': {}", index, field, what));
}

const json& RequireField(const json& record, size_t index,
                         std::string_view field) {
  auto it = record.find(field);
  if (it == record.end()) RecordError(index, field, "missing");
  return *it;
}

std::string RequireString(const json& record, size_t index,
                          std::string_view field) {
  const json& value = RequireField(record, index, field);
  if (!value.is_string()) RecordError(index, field, "expected a string");
  return value.get<std::string>();
}

std::vector<CharSpan> ParseSpans(const json& value, size_t index,
                                 std::string_view field) {
  if (!value.is_array()) RecordError(index, field, "expected a list of pairs");
  std::vector<CharSpan> spans;
  spans.reserve(value.size());
  for (const json& pair : value) {
    if (!pair.is_array() || pair.size() != 2 ||
        !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
      RecordError(index, field, "expected [start, end] integer pairs");
    }
    const auto start = pair[0].get<int64_t>();
    const auto end = pair[1].get<int64_t>();
    if (start < 0 || end <= start) {
      RecordError(index, field,
                  fmt::format("invalid span [{}, {}]", start, end));
    }
    spans.push_back({static_cast<size_t>(start), static_cast<size_t>(end)});
  }
  return spans;
}

json SpansToJson(const std::vector<CharSpan>& spans) {
  json out = json::array();
  for (const CharSpan& s : spans) out.push_back({s.start, s.end});
  return out;
}

json ParseJson(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(fmt::format("invalid JSON: {}", e.what()));
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void CheckUniqueIds(const std::vector<Document>& docs) {
  std::unordered_set<std::string_view> seen;
  for (size_t i = 0; i < docs.size(); ++i) {
    if (!seen.insert(docs[i].id).second) {
      RecordError(i, "id", fmt::format("duplicate id '{}'", docs[i].id));
    }
  }
}

}  // namespace

std::string_view LanguageName(Language language) {
  return kLanguageNames[static_cast<size_t>(language)];
}

std::string_view DomainName(Domain domain) {
  return kDomainNames[static_cast<size_t>(domain)];
}

std::string_view SliceName(Slice slice) {
  return kSliceNames[static_cast<size_t>(slice)];
}

std::optional<Language> ParseLanguage(std::string_view name) {
  for (size_t i = 0; i < kLanguageNames.size(); ++i) {
    if (kLanguageNames[i] == name) return static_cast<Language>(i);
  }
  return std::nullopt;
}

std::optional<Domain> ParseDomain(std::string_view name) {
  for (size_t i = 0; i < kDomainNames.size(); ++i) {
    if (kDomainNames[i] == name) return static_cast<Domain>(i);
  }
  return std::nullopt;
}

std::optional<Slice> ParseSlice(std::string_view name) {
  for (size_t i = 0; i < kSliceNames.size(); ++i) {
    if (kSliceNames[i] == name) return static_cast<Slice>(i);
  }
  return std::nullopt;
}

std::optional<Slice> SliceOf(Language language, Domain domain) {
  const bool sci = domain == Domain::kScientific;
  switch (language) {
    case Language::kDa:
      return sci ? std::nullopt : std::optional(Slice::kDa);
    case Language::kEn:
      return sci ? Slice::kEnSci : Slice::kEnLeg;
    case Language::kFr:
      return sci ? std::nullopt : std::optional(Slice::kFr);
    case Language::kEs:
      return sci ? std::nullopt : std::optional(Slice::kEs);
    case Language::kFa:
      return sci ? std::optional(Slice::kFa) : std::nullopt;
    case Language::kVi:
      return sci ? std::optional(Slice::kVi) : std::nullopt;
  }
  return std::nullopt;
}

std::vector<CharSpan> NormalizeSpans(std::vector<CharSpan> spans) {
  std::sort(spans.begin(), spans.end());
  std::vector<CharSpan> merged;
  for (const CharSpan& s : spans) {
    if (!merged.empty() && s.start < merged.back().end) {
      merged.back().end = std::max(merged.back().end, s.end);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

void ValidateAndNormalize(Document& doc) {
  const size_t length = CodePointLength(doc.text);
  auto check = [&](const std::vector<CharSpan>& spans, std::string_view kind) {
    for (const CharSpan& s : spans) {
      if (s.start >= s.end || s.end > length) {
        throw DataError(fmt::format(
            "document '{}': {} span [{}, {}] out of bounds (text length {})",
            doc.id, kind, s.start, s.end, length));
      }
    }
  };
  check(doc.short_spans, "short");
  check(doc.long_spans, "long");
  doc.short_spans = NormalizeSpans(std::move(doc.short_spans));
  doc.long_spans = NormalizeSpans(std::move(doc.long_spans));
}

std::vector<Document> ParseCorpus(std::string_view json_text) {
  const json root = ParseJson(json_text);
  if (!root.is_array()) throw DataError("corpus: top level must be a list");
  std::vector<Document> docs;
  docs.reserve(root.size());
  for (size_t i = 0; i < root.size(); ++i) {
    const json& record = root[i];
    if (!record.is_object()) RecordError(i, "<record>", "expected an object");
    Document doc;
    doc.id = RequireString(record, i, "id");
    doc.text = RequireString(record, i, "text");
    const std::string language = RequireString(record, i, "language");
    const std::string domain = RequireString(record, i, "domain");
    auto lang = ParseLanguage(language);
    if (!lang) RecordError(i, "language", fmt::format("unknown '{}'", language));
    auto dom = ParseDomain(domain);
    if (!dom) RecordError(i, "domain", fmt::format("unknown '{}'", domain));
    if (!SliceOf(*lang, *dom)) {
      RecordError(i, "domain",
                  fmt::format("no corpus slice for {}/{}", language, domain));
    }
    doc.language = *lang;
    doc.domain = *dom;
    doc.short_spans = ParseSpans(RequireField(record, i, "short"), i, "short");
    doc.long_spans = ParseSpans(RequireField(record, i, "long"), i, "long");
    ValidateAndNormalize(doc);
    docs.push_back(std::move(doc));
  }
  CheckUniqueIds(docs);
  return docs;
}

std::vector<Document> LoadCorpus(const std::filesystem::path& path) {
  return ParseCorpus(ReadFile(path));
}

std::string SerializeCorpus(const std::vector<Document>& docs) {
  json root = json::array();
  for (const Document& doc : docs) {
    json record;
    record["id"] = doc.id;
    record["text"] = doc.text;
    record["language"] = LanguageName(doc.language);
    record["domain"] = DomainName(doc.domain);
    record["short"] = SpansToJson(doc.short_spans);
    record["long"] = SpansToJson(doc.long_spans);
    root.push_back(std::move(record));
  }
  return root.dump(1) + "\n";
}

void SaveCorpus(const std::vector<Document>& docs,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  out << SerializeCorpus(docs);
  if (!out) throw DataError(fmt::format("write failed: {}", path.string()));
}

std::vector<Document> ParseSharedTaskRelease(std::string_view json_text,
                                             Language language,
                                             Domain domain) {
  if (!SliceOf(language, domain)) {
    throw ConfigError(fmt::format("no corpus slice for {}/{}",
                                  LanguageName(language), DomainName(domain)));
  }
  const json root = ParseJson(json_text);
  if (!root.is_array()) throw DataError("release: top level must be a list");
  std::vector<Document> docs;
  docs.reserve(root.size());
  for (size_t i = 0; i < root.size(); ++i) {
    const json& record = root[i];
    if (!record.is_object()) RecordError(i, "<record>", "expected an object");
    Document doc;
    const json& id = RequireField(record, i, "ID");
    if (id.is_string()) {
      doc.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      doc.id = std::to_string(id.get<int64_t>());
    } else {
      RecordError(i, "ID", "expected a string or integer");
    }
    doc.text = RequireString(record, i, "text");
    doc.language = language;
    doc.domain = domain;
    doc.short_spans =
        ParseSpans(RequireField(record, i, "acronyms"), i, "acronyms");
    doc.long_spans =
        ParseSpans(RequireField(record, i, "long-forms"), i, "long-forms");
    try {
      ValidateAndNormalize(doc);
    } catch (const DataError& e) {
      throw DataError(fmt::format("record {}: {}", i, e.what()));
    }
    docs.push_back(std::move(doc));
  }
  CheckUniqueIds(docs);
  return docs;
}

std::vector<Document> FilterSlice(const std::vector<Document>& docs,
                                  Slice slice) {
  std::vector<Document> out;
  for (const Document& doc : docs) {
    if (doc.slice() == slice) out.push_back(doc);
  }
  return out;
}

}  // namespace acrotag
