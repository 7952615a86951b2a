// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#ifndef ACROTAG_ERRORS_H_
#define ACROTAG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace acrotag {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad invocation or configuration: unknown keys, invalid option values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data that cannot be used: malformed records, bad files, id problems.
class DataError : public Error {
 public:
  using Error::Error;
};

// Wrong magic or version in a binary file.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

// Binary file whose contents end early or contradict themselves.
class CorruptionError : public DataError {
 public:
  using DataError::DataError;
};

class MissingIdError : public DataError {
 public:
  using DataError::DataError;
};

// Stored token count disagrees with the tokenizer.
class AlignmentError : public DataError {
 public:
  using DataError::DataError;
};

// A stored tensor whose shape disagrees with the stored configuration.
class CheckpointShapeError : public DataError {
 public:
  using DataError::DataError;
};

// Tensor shapes that do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Non-finite values during training.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace acrotag

#endif  // ACROTAG_ERRORS_H_
