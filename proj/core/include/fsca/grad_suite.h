// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_GRAD_SUITE_H_
#define FSCA_GRAD_SUITE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace fsca {

// Worst relative error of one op over all seeds.
struct GradSuiteEntry {
  std::string op;
  double tolerance = 0.0;
  double worst = 0.0;
  int seeds = 0;
  int checked = 0;
  int skipped = 0;

  bool passed() const { return checked > 0 && worst <= tolerance; }
};

struct GradSuiteResult {
  std::vector<GradSuiteEntry> entries;

  bool passed() const;
};

// Finite-difference check (central, h = 1e-5) of every differentiable op, the
// three modules and the end-to-end loss of a tiny model. Each op runs
// `seeds` independent draws starting from `seed`.
GradSuiteResult RunGradientSuite(uint64_t seed = 0, int seeds = 10);

}  // namespace fsca

#endif  // FSCA_GRAD_SUITE_H_
