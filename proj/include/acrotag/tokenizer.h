// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#ifndef ACROTAG_TOKENIZER_H_
#define ACROTAG_TOKENIZER_H_

#include <string>
#include <string_view>
#include <vector>

#include "acrotag/corpus.h"

namespace acrotag {

struct Token {
  std::string surface;
  CharSpan span;  // code point offsets into the owning text

  bool operator==(const Token&) const = default;
};

// Rule tokenizer. Text is split on Unicode whitespace; within each chunk,
// parenthesis characters are always single tokens and leading and trailing
// punctuation characters are split off one character per token.
std::vector<Token> Tokenize(std::string_view text);

}  // namespace acrotag

#endif  // ACROTAG_TOKENIZER_H_
