// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/model.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fsca/init.h"
#include "fsca/training.h"
#include "test_util.h"

namespace fsca {
namespace {

using testing::BitEqual;
using testing::MaxAbs;
using testing::RandomMatrix;

Waveform Noise(Index n, uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Waveform w;
  w.samples.resize(n);
  for (double& s : w.samples) s = dist(rng);
  return w;
}

Waveform Tone(Index n, double hz, double amp) {
  Waveform w;
  w.samples.resize(n);
  for (Index i = 0; i < n; ++i) w.samples[i] = amp * std::sin(2.0 * M_PI * hz * i / 16000.0);
  return w;
}

bool SameParams(const ModelParams& a, const ModelParams& b) {
  std::vector<const Matrix*> va, vb;
  a.Visit([&](const Parameter& p) { va.push_back(&p.value); });
  b.Visit([&](const Parameter& p) { vb.push_back(&p.value); });
  if (va.size() != vb.size()) return false;
  for (size_t i = 0; i < va.size(); ++i)
    if (!BitEqual(*va[i], *vb[i])) return false;
  return true;
}

TEST(InitTest, DeterministicInSeed) {
  const ModelConfig cfg = testing::TinyConfig();
  EXPECT_TRUE(SameParams(InitParams(cfg, 5), InitParams(cfg, 5)));
  EXPECT_FALSE(SameParams(InitParams(cfg, 5), InitParams(cfg, 6)));
  ModelConfig wide;
  wide.n = 129;  // 2n + 1 = 259 > 257 bins
  EXPECT_THROW(InitParams(wide, 0), ConfigError);
}

TEST(InitTest, Scheme) {
  const ModelConfig cfg = testing::TinyConfig();
  const ModelParams p = InitParams(cfg, 1);
  const auto& b = p.fullband.blocks[0];
  EXPECT_LE(MaxAbs(b.in_weight.value), 1.0 / std::sqrt(33.0));
  EXPECT_LE(MaxAbs(b.depthwise.value), 1.0 / std::sqrt(3.0));
  EXPECT_GT(MaxAbs(b.in_weight.value), 0.0);
  EXPECT_EQ(MaxAbs(b.in_bias.value), 0.0);
  EXPECT_EQ(b.prelu1.value.minCoeff(), 0.25);
  EXPECT_EQ(b.prelu1.value.maxCoeff(), 0.25);
  EXPECT_EQ(b.norm2_gamma.value.minCoeff(), 1.0);
  EXPECT_EQ(MaxAbs(b.norm2_beta.value), 0.0);
  EXPECT_LE(MaxAbs(p.subband.layers[1].recurrent_weight.value), 1.0 / std::sqrt(16.0));
  p.Visit([](const Parameter& q) {
    for (Index i = 0; i < q.Size(); ++i)
      ASSERT_EQ(q.value.data()[i], RoundToFloat(q.value.data()[i])) << q.name;
  });
}

TEST(EnhanceTest, ZeroInZeroOut) {
  const ModelParams p = InitParams(testing::TinyConfig(), 2);
  Waveform z;
  z.samples.assign(1000, 0.0);
  Waveform y = Enhance(z, p);
  EXPECT_EQ(y.size(), 64 + 29 * 32);  // 30 frames
  for (double s : y.samples) EXPECT_EQ(s, 0.0);
}

TEST(EnhanceTest, OutputBoundedAndThreadInvariant) {
  const ModelParams p = InitParams(testing::TinyConfig(), 3);
  Waveform x = Noise(3000, 4, 0.8);
  Waveform a = Enhance(x, p, 1), b = Enhance(x, p, 4);
  ASSERT_EQ(a.size(), b.size());
  for (Index i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(std::isfinite(a.samples[i]));
    EXPECT_GE(a.samples[i], -1.0);
    EXPECT_LE(a.samples[i], kMaxPcmAmplitude);
    EXPECT_EQ(a.samples[i], b.samples[i]);
  }
}

TEST(EnhanceTest, Errors) {
  const ModelParams p = InitParams(testing::TinyConfig(), 3);
  Waveform x = Noise(3000, 4, 0.1);
  x.sample_rate = 8000;
  EXPECT_THROW(Enhance(x, p), FormatError);
  x.sample_rate = 16000;
  x.samples[7] = NAN;
  EXPECT_THROW(Enhance(x, p), FormatError);
  EXPECT_THROW(Enhance(Noise(10, 1, 0.1), p), ShapeError);
}

TEST(EnhanceTest, OracleMaskInjectionRecoversClean) {
  const ModelConfig cfg;
  const Waveform clean = Tone(16000, 440.0, 0.3);
  Waveform noisy = Noise(16000, 6, 0.05);
  for (Index i = 0; i < noisy.size(); ++i) noisy.samples[i] += clean.samples[i];
  const ComplexSpectrogram y = Stft(noisy, cfg.stft()), s = Stft(clean, cfg.stft());
  const Waveform out = ReconstructFromMask(y, TrainingTarget(y, s, cfg.cirm), cfg);
  double se = 0.0;
  Index n = 0;
  for (Index i = cfg.n_fft; i < out.size() - cfg.n_fft; ++i, ++n)
    se += std::pow(out.samples[i] - clean.samples[i], 2);
  EXPECT_LE(std::sqrt(se / n), 1e-3);
}

TEST(ModelTest, PredictionAndGradientsThreadInvariant) {
  for (FusionMode mode : {FusionMode::kAttention, FusionMode::kConcat, FusionMode::kAttentionConcat}) {
    ModelConfig cfg = testing::TinyConfig();
    cfg.fusion_mode = mode;
    const Matrix mag = RandomMatrix(cfg.bins(), 12, 7, 0.0, 2.0);
    const Cirm target{RandomMatrix(cfg.bins(), 12, 8), RandomMatrix(cfg.bins(), 12, 9), true};
    ModelParams a = InitParams(cfg, 10), b = InitParams(cfg, 10);
    Cirm ma = PredictMask(a, mag, 1), mb = PredictMask(a, mag, 3);
    EXPECT_TRUE(BitEqual(ma.real, mb.real));
    EXPECT_TRUE(BitEqual(ma.imag, mb.imag));
    const double la = AccumulateGradients(a, mag, target, 1);
    const double lb = AccumulateGradients(b, mag, target, 3);
    EXPECT_EQ(la, lb);
    EXPECT_EQ(la, SequenceLoss(a, mag, target, 2));
    EXPECT_NEAR(la, CirmMseLoss(ma, target), 1e-12 * la);
    std::vector<const Matrix*> ga, gb;
    a.Visit([&](const Parameter& p) { ga.push_back(&p.grad); });
    b.Visit([&](const Parameter& p) { gb.push_back(&p.grad); });
    for (size_t i = 0; i < ga.size(); ++i) EXPECT_TRUE(BitEqual(*ga[i], *gb[i]));
  }
}

TEST(ModelTest, FusionModesBuild) {
  ModelConfig cfg = testing::TinyConfig();
  cfg.fusion_mode = FusionMode::kConcat;
  ModelParams p = InitParams(cfg, 1);
  EXPECT_FALSE(p.fsca.has_value());
  EXPECT_EQ(p.subband.input_width(), cfg.unit_width() + 1);
  cfg.fusion_mode = FusionMode::kAttentionConcat;
  p = InitParams(cfg, 1);
  EXPECT_TRUE(p.fsca.has_value());
  EXPECT_EQ(p.subband.input_width(), cfg.unit_width() + 1);
}

TEST(ModelTest, DefaultConfigForwardShape) {
  const ModelConfig cfg;
  const ModelParams p = InitParams(cfg, 0);
  const Matrix mag = RandomMatrix(cfg.bins(), 4, 1, 0.0, 1.0);
  const Cirm m = PredictMask(p, mag);
  EXPECT_EQ(m.real.rows(), 257);
  EXPECT_EQ(m.real.cols(), 4);
  EXPECT_TRUE(m.compressed);
  EXPECT_THROW(PredictMask(p, RandomMatrix(100, 4, 1)), ShapeError);
}

}  // namespace
}  // namespace fsca
