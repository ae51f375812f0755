// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/cirm.h"

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"

namespace fsca {
namespace {

using testing::MaxAbs;
using testing::RandomMatrix;

ComplexSpectrogram RandomSpec(Index f, Index t, uint64_t seed) {
  return {RandomMatrix(f, t, seed), RandomMatrix(f, t, seed + 1)};
}

TEST(CirmTest, IdentityZeroAndRotation) {
  const ComplexSpectrogram y = RandomSpec(5, 4, 1);
  Cirm m = ComputeCirm(y, y);
  EXPECT_FALSE(m.compressed);
  EXPECT_LE(MaxAbs(m.real.array() - 1.0), 1e-8);
  EXPECT_LE(MaxAbs(m.imag), 1e-8);

  ComplexSpectrogram zero{Matrix::Zero(5, 4), Matrix::Zero(5, 4)};
  Cirm z = ComputeCirm(y, zero);
  EXPECT_EQ(MaxAbs(z.real), 0.0);
  EXPECT_EQ(MaxAbs(z.imag), 0.0);

  ComplexSpectrogram one{Matrix::Ones(1, 1), Matrix::Zero(1, 1)};
  ComplexSpectrogram i{Matrix::Zero(1, 1), Matrix::Ones(1, 1)};
  Cirm r = ComputeCirm(one, i);
  EXPECT_NEAR(r.real(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(r.imag(0, 0), 1.0, 1e-9);
}

TEST(CirmTest, SilentBinsStayFinite) {
  ComplexSpectrogram y{Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  Cirm m = ComputeCirm(y, RandomSpec(2, 2, 3));
  EXPECT_TRUE(m.real.allFinite());
  EXPECT_TRUE(m.imag.allFinite());
}

TEST(CompressionTest, OddBoundedMonotone) {
  const CirmCompression c;
  EXPECT_EQ(CompressValue(0.0, c), 0.0);
  EXPECT_NEAR(CompressValue(1e6, c), 10.0, 1e-12);
  EXPECT_NEAR(CompressValue(-1e6, c), -10.0, 1e-12);
  double prev = -c.K;
  for (double x = -300.0; x <= 300.0; x += 0.25) {
    const double v = CompressValue(x, c);
    EXPECT_EQ(v, -CompressValue(-x, c));
    EXPECT_GE(v, prev);
    EXPECT_LE(std::abs(v), c.K);
    if (std::abs(x) < 100.0) {
      EXPECT_GT(v, prev);
    }
    prev = v;
  }
  // Agrees with the exponential form.
  for (double x : {-7.0, -0.3, 0.9, 12.0}) {
    const double e = std::exp(-c.C * x);
    EXPECT_NEAR(CompressValue(x, c), c.K * (1.0 - e) / (1.0 + e), 1e-12);
  }
}

TEST(CompressionTest, RoundTripOnFiftyRange) {
  const CirmCompression c;
  EXPECT_EQ(DecompressValue(0.0, c), 0.0);
  for (double x = -50.0; x <= 50.0; x += 0.01)
    EXPECT_NEAR(DecompressValue(CompressValue(x, c), c), x, 1e-6) << x;
}

TEST(CompressionTest, ClampedAtAsymptote) {
  const CirmCompression c;
  for (double v : {c.K - 1e-6, c.K, c.K + 5.0, -c.K, -c.K - 1.0}) {
    const double d = DecompressValue(v, c);
    EXPECT_TRUE(std::isfinite(d)) << v;
    EXPECT_GT(std::abs(d), 100.0);
  }
}

TEST(CompressionTest, StateIsTracked) {
  Cirm m{RandomMatrix(3, 3, 1), RandomMatrix(3, 3, 2), false};
  Cirm c = Compress(m);
  EXPECT_TRUE(c.compressed);
  EXPECT_THROW(Compress(c), ShapeError);
  EXPECT_THROW(Decompress(m), ShapeError);
  ComplexSpectrogram y = RandomSpec(3, 3, 4);
  EXPECT_THROW(ApplyMask(y, c), ShapeError);
  Cirm d = Decompress(c);
  EXPECT_LE(MaxAbs(d.real - m.real), 1e-12);
}

TEST(ApplyMaskTest, IdentityAndZero) {
  const ComplexSpectrogram y = RandomSpec(4, 6, 5);
  Cirm one{Matrix::Ones(4, 6), Matrix::Zero(4, 6), false};
  ComplexSpectrogram s = ApplyMask(y, one);
  EXPECT_EQ(MaxAbs(s.real - y.real), 0.0);
  EXPECT_EQ(MaxAbs(s.imag - y.imag), 0.0);
  Cirm zero{Matrix::Zero(4, 6), Matrix::Zero(4, 6), false};
  ComplexSpectrogram z = ApplyMask(y, zero);
  EXPECT_EQ(MaxAbs(z.real), 0.0);
  Cirm wrong{Matrix::Ones(3, 6), Matrix::Zero(3, 6), false};
  EXPECT_THROW(ApplyMask(y, wrong), ShapeError);
}

TEST(ApplyMaskTest, OracleRecoversClean) {
  const ComplexSpectrogram y = RandomSpec(33, 20, 7);
  const ComplexSpectrogram s = RandomSpec(33, 20, 9);
  const Cirm m = ComputeCirm(y, s);
  const ComplexSpectrogram r = ApplyMask(y, m);
  const ComplexSpectrogram rc = ApplyMask(y, Decompress(Compress(m)));
  for (Index f = 0; f < 33; ++f)
    for (Index t = 0; t < 20; ++t) {
      const double ymag = std::hypot(y.real(f, t), y.imag(f, t));
      const double smag = std::max(std::hypot(s.real(f, t), s.imag(f, t)), 1e-12);
      if (ymag <= 1e-5) continue;
      const double err = std::hypot(r.real(f, t) - s.real(f, t), r.imag(f, t) - s.imag(f, t));
      EXPECT_LE(err / smag, 1e-6);
      if (std::abs(m.real(f, t)) <= 50.0 && std::abs(m.imag(f, t)) <= 50.0) {
        const double errc = std::hypot(rc.real(f, t) - s.real(f, t), rc.imag(f, t) - s.imag(f, t));
        EXPECT_LE(errc / smag, 1e-4);
      }
    }
}

}  // namespace
}  // namespace fsca
