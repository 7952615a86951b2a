// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include <iostream>

#include "acrotag/cli.h"

int main(int argc, char** argv) {
  return acrotag::RunCli(argc, argv, std::cout, std::cerr);
}
