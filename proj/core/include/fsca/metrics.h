// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_METRICS_H_
#define FSCA_METRICS_H_

#include <cstdint>
#include <vector>

#include "fsca/audio.h"
#include "fsca/model.h"

namespace fsca {

inline constexpr double kSiSdrCapDb = 100.0;

struct EvalReport {
  double si_sdr_db = 0.0;
  Index length_samples = 0;
};

// Scale-invariant SDR in dB, clamped to [-100, 100]. Throws ShapeError on a
// length mismatch and FormatError on an all-zero reference.
double SiSdr(const std::vector<double>& reference, const std::vector<double>& estimate);
EvalReport Evaluate(const Waveform& reference, const Waveform& estimate);

struct ParamBreakdown {
  int64_t fullband = 0;
  int64_t fsca = 0;
  int64_t subband = 0;

  int64_t total() const { return fullband + fsca + subband; }
};

ParamBreakdown ParamCount(const ModelParams& p);

}  // namespace fsca

#endif  // FSCA_METRICS_H_
