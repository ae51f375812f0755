// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <iostream>

#include "cli.h"

int main(int argc, char** argv) {
  return fsca::cli::Run(argc, argv, std::cout, std::cerr);
}
