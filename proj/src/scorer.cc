// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/scorer.h"

#include <algorithm>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "acrotag/errors.h"

namespace acrotag {
namespace {

Prf FromCounts(size_t true_pos, size_t predicted, size_t gold,
               const ScorerOptions& options) {
  Prf out;
  out.precision = predicted == 0 ? options.vacuous
                                 : static_cast<double>(true_pos) / predicted;
  out.recall = gold == 0 ? options.vacuous
                         : static_cast<double>(true_pos) / gold;
  if (out.precision + out.recall == 0.0) {
    out.f1 = 0.0;
  } else if (predicted > 0 && gold > 0) {
    // Equal to 2PR/(P+R), without the intermediate rounding.
    out.f1 = 2.0 * static_cast<double>(true_pos) / (predicted + gold);
  } else {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

Prf Macro(const Prf& a, const Prf& b) {
  return {(a.precision + b.precision) / 2.0, (a.recall + b.recall) / 2.0,
          (a.f1 + b.f1) / 2.0};
}

std::unordered_map<std::string_view, const Document*> IndexById(
    const std::vector<Document>& docs, std::string_view role) {
  std::unordered_map<std::string_view, const Document*> index;
  for (const Document& doc : docs) {
    if (!index.emplace(doc.id, &doc).second) {
      throw DataError(fmt::format("{}: duplicate document id '{}'", role, doc.id));
    }
  }
  return index;
}

ScoreReport ScorePairs(
    const std::vector<std::pair<const Document*, const Document*>>& pairs,
    const ScorerOptions& options) {
  SpansById pred_short, gold_short, pred_long, gold_long;
  for (const auto& [pred, gold] : pairs) {
    pred_short[pred->id] = pred->short_spans;
    pred_long[pred->id] = pred->long_spans;
    gold_short[gold->id] = gold->short_spans;
    gold_long[gold->id] = gold->long_spans;
  }
  ScoreReport report;
  report.short_form = ScoreClass(pred_short, gold_short, options);
  report.long_form = ScoreClass(pred_long, gold_long, options);
  report.macro = Macro(report.short_form, report.long_form);
  return report;
}

}  // namespace

Prf ScoreClass(const SpansById& pred, const SpansById& gold,
               const ScorerOptions& options) {
  size_t true_pos = 0;
  size_t predicted = 0;
  size_t gold_count = 0;
  for (const auto& [id, spans] : gold) {
    gold_count += std::set<CharSpan>(spans.begin(), spans.end()).size();
  }
  for (const auto& [id, spans] : pred) {
    auto g = gold.find(id);
    if (g == gold.end()) {
      throw DataError(fmt::format("prediction for unknown document '{}'", id));
    }
    const std::set<CharSpan> unique(spans.begin(), spans.end());
    const std::set<CharSpan> gold_set(g->second.begin(), g->second.end());
    predicted += unique.size();
    for (const CharSpan& s : unique) true_pos += gold_set.count(s);
  }
  return FromCounts(true_pos, predicted, gold_count, options);
}

ScoreReport ScoreCorpus(const std::vector<Document>& pred,
                        const std::vector<Document>& gold,
                        const ScorerOptions& options) {
  return ScoreBySlice(pred, gold, options).all;
}

SliceReport ScoreBySlice(const std::vector<Document>& pred,
                         const std::vector<Document>& gold,
                         const ScorerOptions& options) {
  const auto pred_index = IndexById(pred, "predictions");
  const auto gold_index = IndexById(gold, "gold");
  for (const Document& doc : pred) {
    if (!gold_index.count(doc.id)) {
      throw DataError(fmt::format("prediction for unknown document '{}'", doc.id));
    }
  }
  std::vector<std::pair<const Document*, const Document*>> all;
  std::array<std::vector<std::pair<const Document*, const Document*>>,
             kNumSlices>
      by_slice;
  for (const Document& doc : gold) {
    auto it = pred_index.find(doc.id);
    if (it == pred_index.end()) {
      throw DataError(fmt::format("no prediction for document '{}'", doc.id));
    }
    all.emplace_back(it->second, &doc);
    by_slice[static_cast<size_t>(doc.slice())].emplace_back(it->second, &doc);
  }
  SliceReport report;
  report.all = ScorePairs(all, options);
  for (size_t s = 0; s < kNumSlices; ++s) {
    if (!by_slice[s].empty()) report.slices[s] = ScorePairs(by_slice[s], options);
  }
  return report;
}

std::string FormatPrf(const Prf& prf) {
  return fmt::format("{:.3f}/{:.3f}/{:.3f}", prf.precision, prf.recall, prf.f1);
}

std::string FormatSliceReport(const SliceReport& report) {
  constexpr int kCell = 17;
  std::string out = fmt::format("{:<7}{:>{}}", "class", "all", kCell);
  for (Slice slice : kAllSlices) {
    out += fmt::format("{:>{}}", SliceName(slice), kCell);
  }
  out += "\n";
  auto row = [&](std::string_view label, auto pick) {
    out += fmt::format("{:<7}{:>{}}", label, FormatPrf(pick(report.all)), kCell);
    for (const auto& slice : report.slices) {
      out += fmt::format("{:>{}}", slice ? FormatPrf(pick(*slice)) : "-", kCell);
    }
    out += "\n";
  };
  row("short", [](const ScoreReport& r) { return r.short_form; });
  row("long", [](const ScoreReport& r) { return r.long_form; });
  row("macro", [](const ScoreReport& r) { return r.macro; });
  return out;
}

nlohmann::json PrfToJson(const Prf& prf) {
  return {{"p", prf.precision}, {"r", prf.recall}, {"f1", prf.f1}};
}

nlohmann::json ScoreReportToJson(const ScoreReport& report) {
  return {{"short", PrfToJson(report.short_form)},
          {"long", PrfToJson(report.long_form)},
          {"macro", PrfToJson(report.macro)}};
}

nlohmann::json SliceReportToJson(const SliceReport& report) {
  nlohmann::json out;
  out["all"] = ScoreReportToJson(report.all);
  for (Slice slice : kAllSlices) {
    const auto& r = report.slices[static_cast<size_t>(slice)];
    out[std::string(SliceName(slice))] =
        r ? ScoreReportToJson(*r) : nlohmann::json(nullptr);
  }
  return out;
}

}  // namespace acrotag
