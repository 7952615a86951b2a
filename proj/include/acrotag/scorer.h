// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Span-level scoring. A predicted span is correct only when a gold span of
// the same document and class has identical boundaries. Counts are pooled
// over documents within a class; the macro scores average the short-form and
// long-form classes.

#ifndef ACROTAG_SCORER_H_
#define ACROTAG_SCORER_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acrotag/corpus.h"

namespace acrotag {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const Prf&) const = default;
};

struct ScoreReport {
  Prf short_form;
  Prf long_form;
  Prf macro;

  bool operator==(const ScoreReport&) const = default;
};

struct ScorerOptions {
  // Precision with no predictions (and recall with no gold spans).
  double vacuous = 1.0;
};

// Span lists keyed by document id.
using SpansById = std::map<std::string, std::vector<CharSpan>>;

// Throws DataError when `pred` has an id missing from `gold`. Gold documents
// absent from `pred` count as having no predictions.
Prf ScoreClass(const SpansById& pred, const SpansById& gold,
               const ScorerOptions& options = {});

// Both corpora must hold the same set of ids; throws DataError otherwise.
ScoreReport ScoreCorpus(const std::vector<Document>& pred,
                        const std::vector<Document>& gold,
                        const ScorerOptions& options = {});

// Scores per corpus slice plus "all", which pools every document. Slices with
// no gold documents are empty.
struct SliceReport {
  std::array<std::optional<ScoreReport>, kNumSlices> slices;
  ScoreReport all;
};

SliceReport ScoreBySlice(const std::vector<Document>& pred,
                         const std::vector<Document>& gold,
                         const ScorerOptions& options = {});

// Table with one row per class and one P/R/F1 cell per column.
std::string FormatSliceReport(const SliceReport& report);
std::string FormatPrf(const Prf& prf);

nlohmann::json PrfToJson(const Prf& prf);
nlohmann::json ScoreReportToJson(const ScoreReport& report);
nlohmann::json SliceReportToJson(const SliceReport& report);

}  // namespace acrotag

#endif  // ACROTAG_SCORER_H_
