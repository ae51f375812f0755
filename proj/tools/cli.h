// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_TOOLS_CLI_H_
#define FSCA_TOOLS_CLI_H_

#include <iosfwd>

namespace fsca::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // e.g. grad-check over tolerance
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitFormat = 4;

// Entry point shared by the `fsca` binary and the tests.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fsca::cli

#endif  // FSCA_TOOLS_CLI_H_
