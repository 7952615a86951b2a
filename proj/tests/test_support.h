// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.
//
// Helpers shared by the unit and acceptance tests. The oracles here are
// written directly from the definitions and do not call the code they check.

#ifndef ACROTAG_TESTS_TEST_SUPPORT_H_
#define ACROTAG_TESTS_TEST_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "acrotag/corpus.h"
#include "acrotag/crf.h"
#include "acrotag/model.h"
#include "acrotag/random.h"
#include "acrotag/tensor.h"

namespace acrotag::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

void WriteFile(const std::filesystem::path& path, const std::string& text);
std::string ReadFile(const std::filesystem::path& path);

Matrix RandomMatrix(size_t rows, size_t cols, double lo, double hi,
                    SplitMix64& rng);

// Brute-force CRF quantities over all T^n paths, straight from the path
// score definition.
struct PathEnumeration {
  std::vector<std::vector<size_t>> paths;
  std::vector<double> scores;
};
PathEnumeration EnumeratePaths(const CrfParams& params, const Matrix& emissions);
bool PathRespectsMask(std::span<const size_t> path);

// Central finite difference of f with respect to *x.
double CentralDifference(double* x, double h, const std::function<double()>& f);

// |a - b| <= max(abs_floor, rel * max(|a|, |b|))
bool GradientClose(double analytic, double numeric, double rel, double abs_floor);

// Compares every analytic gradient of the tagger's NLL on `sentence` (dense
// tensors and the lookup rows the sentence touches) with central finite
// differences of step h. Masked CRF entries must have zero gradient.
struct GradientCheckResult {
  size_t checked = 0;
  size_t failed = 0;
  // Largest |analytic - numeric| / max(abs_floor, rel * max(|a|, |n|)).
  double worst = 0.0;
  std::string first_failure;
};
GradientCheckResult CheckTaggerGradients(Tagger& model,
                                         const TaggedSentence& sentence,
                                         double h, double rel,
                                         double abs_floor);

// "<context> <long form> ( <ACR> ) <context>" documents, spread across the
// corpus slices, with gold spans on the long form and the acronym.
std::vector<Document> SyntheticAcronymCorpus(size_t count, uint64_t seed);

// Text of random words with disjoint short and long spans on whole words.
// Offsets are computed while the text is assembled, not by the tokenizer.
struct CodecCase {
  std::string text;
  std::vector<CharSpan> short_spans;
  std::vector<CharSpan> long_spans;
};
CodecCase RandomCodecCase(SplitMix64& rng);

}  // namespace acrotag::testing

#endif  // ACROTAG_TESTS_TEST_SUPPORT_H_
