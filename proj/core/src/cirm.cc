// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/cirm.h"

#include <algorithm>
#include <cmath>

namespace fsca {
namespace {

void ExpectSameShape(const Matrix& a, const Matrix& b, const char* what) {
  ExpectShape(b, a.rows(), a.cols(), what);
}

template <typename Fn>
Cirm MapEntries(const Cirm& m, bool compressed, Fn fn) {
  Cirm out;
  out.real = m.real.unaryExpr(fn);
  out.imag = m.imag.unaryExpr(fn);
  out.compressed = compressed;
  return out;
}

}  // namespace

Cirm ComputeCirm(const ComplexSpectrogram& noisy, const ComplexSpectrogram& clean) {
  ExpectSameShape(noisy.real, noisy.imag, "ComputeCirm noisy imag");
  ExpectSameShape(noisy.real, clean.real, "ComputeCirm clean real");
  ExpectSameShape(noisy.real, clean.imag, "ComputeCirm clean imag");
  const auto yr = noisy.real.array(), yi = noisy.imag.array();
  const auto sr = clean.real.array(), si = clean.imag.array();
  const auto denom = yr.square() + yi.square() + kCirmEpsilon;
  Cirm m;
  m.real = ((yr * sr + yi * si) / denom).matrix();
  m.imag = ((yr * si - yi * sr) / denom).matrix();
  return m;
}

double CompressValue(double x, const CirmCompression& c) {
  // K (1 - e^{-Cx}) / (1 + e^{-Cx}) == K tanh(Cx / 2), without overflow.
  return c.K * std::tanh(0.5 * c.C * x);
}

double DecompressValue(double x, const CirmCompression& c) {
  const double v = std::clamp(x, -c.K + kDecompressMargin, c.K - kDecompressMargin);
  return -std::log((c.K - v) / (c.K + v)) / c.C;
}

Cirm Compress(const Cirm& m, const CirmCompression& c) {
  if (m.compressed) throw ShapeError("Compress: mask is already compressed");
  ExpectSameShape(m.real, m.imag, "Compress imag");
  return MapEntries(m, true, [&c](double x) { return CompressValue(x, c); });
}

Cirm Decompress(const Cirm& m, const CirmCompression& c) {
  if (!m.compressed) throw ShapeError("Decompress: mask is not compressed");
  ExpectSameShape(m.real, m.imag, "Decompress imag");
  return MapEntries(m, false, [&c](double x) { return DecompressValue(x, c); });
}

ComplexSpectrogram ApplyMask(const ComplexSpectrogram& noisy, const Cirm& m) {
  if (m.compressed) throw ShapeError("ApplyMask: mask must be decompressed first");
  ExpectSameShape(noisy.real, noisy.imag, "ApplyMask noisy imag");
  ExpectSameShape(noisy.real, m.real, "ApplyMask mask real");
  ExpectSameShape(noisy.real, m.imag, "ApplyMask mask imag");
  const auto yr = noisy.real.array(), yi = noisy.imag.array();
  const auto mr = m.real.array(), mi = m.imag.array();
  ComplexSpectrogram out;
  out.real = (mr * yr - mi * yi).matrix();
  out.imag = (mr * yi + mi * yr).matrix();
  return out;
}

}  // namespace fsca
