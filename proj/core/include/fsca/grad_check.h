// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_GRAD_CHECK_H_
#define FSCA_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fsca/tape.h"

namespace fsca {

struct GradCheckOptions {
  double step = 1e-5;
  // Relative error is |analytic - numeric| / max(|analytic|, |numeric|, floor).
  double floor = 1e-4;
  // 0 checks every entry of every target; otherwise this many entries are
  // sampled uniformly across all targets.
  int sample_entries = 0;
  // Skip entries whose one-sided differences disagree by more than
  // `kink_tolerance` relative, i.e. the step straddles a ReLU/PReLU kink.
  bool skip_kinks = false;
  double kink_tolerance = 1e-2;
};

struct GradCheckReport {
  std::string name;
  double max_rel_error = 0.0;
  int checked = 0;
  int skipped = 0;
};

// Storage a check perturbs in place: an operation input or a parameter value.
using GradTargets = std::vector<Matrix*>;

// Builds the graph under test on a fresh tape, reading the current contents
// of the targets (via Tape::Ref / Tape::Bind) and returning the output.
using GraphBuilder = std::function<Var(Tape&)>;

// Projects the output onto a random direction r (seeded), so the scalar is
// L = <r, y>, back-propagates analytically and compares every target entry
// against central differences of L.
GradCheckReport GradCheck(const std::string& name, const GradTargets& targets,
                          const GraphBuilder& build, uint64_t seed,
                          const GradCheckOptions& opts = {});

// Lower-level form for code paths that compute gradients without a single
// tape: `loss` evaluates the scalar, `analytic` returns one gradient matrix
// per target (same shapes) at the current target values.
GradCheckReport GradCheckScalar(
    const std::string& name, const GradTargets& targets,
    const std::function<double()>& loss,
    const std::function<std::vector<Matrix>()>& analytic, uint64_t seed,
    const GradCheckOptions& opts = {});

}  // namespace fsca

#endif  // FSCA_GRAD_CHECK_H_
