// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#ifndef ACROTAG_UNICODE_H_
#define ACROTAG_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace acrotag {

// One decoded scalar value and the byte range it occupies in the source.
struct CodePoint {
  char32_t value;
  size_t byte_begin;
  size_t byte_end;
};

// Decodes UTF-8. Ill-formed sequences decode to U+FFFD.
std::vector<CodePoint> DecodeUtf8(std::string_view text);

// Number of Unicode scalar values in a UTF-8 string.
size_t CodePointLength(std::string_view text);

bool IsWhitespace(char32_t c);
bool IsPunctuation(char32_t c);
bool IsParenthesis(char32_t c);

// Lowercases and NFC-normalizes a UTF-8 string.
std::string LowercaseNfc(std::string_view text);

}  // namespace acrotag

#endif  // ACROTAG_UNICODE_H_
