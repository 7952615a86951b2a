// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/tokenizer.h"

#include "acrotag/unicode.h"

namespace acrotag {
namespace {

class TokenSink {
 public:
  TokenSink(std::string_view text, const std::vector<CodePoint>& cps,
            std::vector<Token>& out)
      : text_(text), cps_(cps), out_(out) {}

  void Emit(size_t begin, size_t end) {
    if (begin >= end) return;
    const size_t byte_begin = cps_[begin].byte_begin;
    const size_t byte_end = cps_[end - 1].byte_end;
    out_.push_back({std::string(text_.substr(byte_begin, byte_end - byte_begin)),
                    {begin, end}});
  }

  // A run of non-whitespace, non-parenthesis characters.
  void EmitPiece(size_t begin, size_t end) {
    size_t lead = begin;
    while (lead < end && IsPunctuation(cps_[lead].value)) {
      Emit(lead, lead + 1);
      ++lead;
    }
    size_t trail = end;
    while (trail > lead && IsPunctuation(cps_[trail - 1].value)) --trail;
    Emit(lead, trail);
    for (size_t i = trail; i < end; ++i) Emit(i, i + 1);
  }

 private:
  std::string_view text_;
  const std::vector<CodePoint>& cps_;
  std::vector<Token>& out_;
};

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  const std::vector<CodePoint> cps = DecodeUtf8(text);
  std::vector<Token> tokens;
  TokenSink sink(text, cps, tokens);
  size_t piece_begin = 0;
  for (size_t i = 0; i <= cps.size(); ++i) {
    const bool at_end = i == cps.size();
    if (at_end || IsWhitespace(cps[i].value)) {
      sink.EmitPiece(piece_begin, i);
      piece_begin = i + 1;
    } else if (IsParenthesis(cps[i].value)) {
      sink.EmitPiece(piece_begin, i);
      sink.Emit(i, i + 1);
      piece_begin = i + 1;
    }
  }
  return tokens;
}

}  // namespace acrotag
