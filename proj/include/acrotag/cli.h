// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#ifndef ACROTAG_CLI_H_
#define ACROTAG_CLI_H_

#include <ostream>

namespace acrotag {

// Process exit codes.
enum class ExitStatus : int {
  kOk = 0,
  kUsage = 1,    // bad flags, unknown config keys
  kData = 2,     // unreadable or inconsistent input
  kRuntime = 3,  // failures during computation
};

// Entry point of the `acrotag` binary. Results go to `out`, log lines and
// errors to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace acrotag

#endif  // ACROTAG_CLI_H_
