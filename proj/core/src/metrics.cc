// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace fsca {

double SiSdr(const std::vector<double>& reference, const std::vector<double>& estimate) {
  if (reference.size() != estimate.size()) {
    throw ShapeError("SiSdr: reference has " + std::to_string(reference.size()) +
                     " samples, estimate has " + std::to_string(estimate.size()));
  }
  double ss = 0.0, es = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    ss += reference[i] * reference[i];
    es += estimate[i] * reference[i];
  }
  if (ss == 0.0) throw FormatError("SiSdr: reference signal is all zeros");
  const double alpha = es / ss;
  double target = 0.0, error = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    const double t = alpha * reference[i];
    const double e = t - estimate[i];
    target += t * t;
    error += e * e;
  }
  if (error == 0.0) return target == 0.0 ? -kSiSdrCapDb : kSiSdrCapDb;
  if (target == 0.0) return -kSiSdrCapDb;
  return std::clamp(10.0 * std::log10(target / error), -kSiSdrCapDb, kSiSdrCapDb);
}

EvalReport Evaluate(const Waveform& reference, const Waveform& estimate) {
  if (reference.sample_rate != estimate.sample_rate)
    throw FormatError("Evaluate: sample rates differ");
  return {SiSdr(reference.samples, estimate.samples), reference.size()};
}

ParamBreakdown ParamCount(const ModelParams& p) {
  ParamBreakdown b;
  p.fullband.Visit([&](const Parameter& x) { b.fullband += x.Size(); });
  if (p.fsca) p.fsca->Visit([&](const Parameter& x) { b.fsca += x.Size(); });
  p.subband.Visit([&](const Parameter& x) { b.subband += x.Size(); });
  return b;
}

}  // namespace fsca
