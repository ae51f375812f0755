// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_CIRM_H_
#define FSCA_CIRM_H_

#include "fsca/audio.h"

namespace fsca {

// Complex ideal ratio mask M = S / Y, optionally in the bounded
// K (1 - e^{-Cx}) / (1 + e^{-Cx}) domain used as the training target.
struct Cirm {
  Matrix real;  // [F, T]
  Matrix imag;  // [F, T]
  bool compressed = false;
};

struct CirmCompression {
  double K = 10.0;
  double C = 0.1;

  bool operator==(const CirmCompression&) const = default;
};

inline constexpr double kCirmEpsilon = 1e-10;
inline constexpr double kDecompressMargin = 1e-6;

Cirm ComputeCirm(const ComplexSpectrogram& noisy, const ComplexSpectrogram& clean);

double CompressValue(double x, const CirmCompression& c);
// Input is clamped to (-K + 1e-6, K - 1e-6) so the result is always finite.
double DecompressValue(double x, const CirmCompression& c);

Cirm Compress(const Cirm& m, const CirmCompression& c = {});
Cirm Decompress(const Cirm& m, const CirmCompression& c = {});

// Complex multiplication M * Y. Throws ShapeError for a compressed mask.
ComplexSpectrogram ApplyMask(const ComplexSpectrogram& noisy, const Cirm& m);

}  // namespace fsca

#endif  // FSCA_CIRM_H_
