// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/training.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fsca/grad_check.h"
#include "test_util.h"

namespace fsca {
namespace {

using testing::BitEqual;
using testing::RandomMatrix;

Waveform Gaussian(Index n, uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Waveform w;
  w.samples.resize(n);
  for (double& s : w.samples) s = dist(rng);
  return w;
}

double SnrDb(const MixResult& m) {
  return 10.0 * std::log10(MeanPower(m.target.samples) / MeanPower(m.noise.samples));
}

TEST(MixTest, RequestedSnrIsRealized) {
  const Waveform clean = Gaussian(4000, 1, 0.05), noise = Gaussian(3000, 2, 0.2);
  for (double snr : {-5.0, -1.3, 0.0, 7.5, 20.0}) {
    const MixResult m = Mix(clean, noise, snr);
    EXPECT_NEAR(SnrDb(m), snr, 1e-6);
    for (Index i = 0; i < m.noisy.size(); ++i)
      EXPECT_NEAR(m.noisy.samples[i], m.target.samples[i] + m.noise.samples[i], 1e-15);
  }
  const MixResult zero = Mix(clean, noise, 0.0);
  EXPECT_NEAR(MeanPower(zero.noise.samples) / MeanPower(zero.target.samples), 1.0, 1e-9);
  const MixResult twenty = Mix(clean, noise, 20.0);
  EXPECT_NEAR(MeanPower(twenty.noise.samples) * 100.0 / MeanPower(twenty.target.samples), 1.0, 1e-9);
}

TEST(MixTest, NoiseIsLoopedToCleanLength) {
  const Waveform clean = Gaussian(1000, 3, 0.1);
  Waveform noise{{1.0, -1.0, 0.5}, 16000};
  const MixResult m = Mix(clean, noise, 10.0);
  ASSERT_EQ(m.noise.size(), 1000);
  EXPECT_EQ(m.noise.samples[0], m.noise.samples[3]);
  EXPECT_EQ(m.noise.samples[2], m.noise.samples[998]);
}

TEST(MixTest, ImpulseRirKeepsClean) {
  const Waveform clean = Gaussian(2000, 4, 0.1), noise = Gaussian(2000, 5, 0.1);
  Waveform impulse{{1.0, 0.0, 0.0, 0.0}, 16000};
  const MixResult m = Mix(clean, noise, 5.0, &impulse);
  EXPECT_EQ(m.target.samples, clean.samples);
}

TEST(MixTest, RirTargetIsReverberant) {
  const Waveform clean = Gaussian(500, 6, 0.1), noise = Gaussian(500, 7, 0.1);
  Waveform rir{{0.5, 0.25, -0.125}, 16000};
  const MixResult m = Mix(clean, noise, 5.0, &rir);
  ASSERT_EQ(m.target.size(), 500);
  for (Index n = 2; n < 500; ++n) {
    const double expect = 0.5 * clean.samples[n] + 0.25 * clean.samples[n - 1] -
                          0.125 * clean.samples[n - 2];
    EXPECT_NEAR(m.target.samples[n], expect, 1e-15);
  }
  EXPECT_NEAR(SnrDb(m), 5.0, 1e-6);
}

TEST(MixTest, PeakNormalization) {
  const Waveform clean = Gaussian(4000, 8, 0.8), noise = Gaussian(4000, 9, 0.8);
  const MixResult m = Mix(clean, noise, 0.0);
  double peak = 0.0;
  for (double s : m.noisy.samples) peak = std::max(peak, std::abs(s));
  EXPECT_NEAR(peak, 0.99, 1e-12);
  EXPECT_LT(m.peak_scale, 1.0);
  for (Index i = 0; i < 10; ++i)
    EXPECT_NEAR(m.target.samples[i], clean.samples[i] * m.peak_scale, 1e-15);
  EXPECT_NEAR(SnrDb(m), 0.0, 1e-6);
}

TEST(MixTest, Errors) {
  const Waveform clean = Gaussian(100, 10, 0.1);
  Waveform silent{std::vector<double>(100, 0.0), 16000};
  EXPECT_THROW(Mix(silent, clean, 0.0), FormatError);
  EXPECT_THROW(Mix(clean, silent, 0.0), FormatError);
  Waveform other = clean;
  other.sample_rate = 8000;
  EXPECT_THROW(Mix(clean, other, 0.0), FormatError);
}

TEST(DynamicMixerTest, RirRateAndChunkLength) {
  TrainingData data;
  data.clean = {Gaussian(3000, 1, 0.1), Gaussian(1500, 2, 0.1)};
  data.noise = {Gaussian(2500, 3, 0.1)};
  data.rirs = {Waveform{{1.0, 0.3}, 16000}};
  MixSpec spec;
  spec.seed = 42;
  DynamicMixer mixer(&data, spec, 2080);
  int with_rir = 0;
  for (int i = 0; i < 1000; ++i) {
    DynamicMixer::Draw d = mixer.Next();
    EXPECT_EQ(d.mix.noisy.size(), 2080);
    EXPECT_GE(d.snr_db, -5.0);
    EXPECT_LE(d.snr_db, 20.0);
    with_rir += d.used_rir;
  }
  EXPECT_GE(with_rir, 700);
  EXPECT_LE(with_rir, 800);
}

TEST(DynamicMixerTest, EmptyDataRejected) {
  TrainingData data;
  data.noise = {Gaussian(100, 1, 0.1)};
  EXPECT_THROW(DynamicMixer(&data, MixSpec{}, 100), IoError);
}

TEST(CirmMseLossTest, Examples) {
  Cirm a{RandomMatrix(4, 5, 1), RandomMatrix(4, 5, 2), true};
  EXPECT_EQ(CirmMseLoss(a, a), 0.0);
  Cirm b{a.real.array() + 1.0, a.imag.array() + 1.0, true};
  EXPECT_NEAR(CirmMseLoss(b, a), 1.0, 1e-15);
  Cirm c{RandomMatrix(4, 4, 3), RandomMatrix(4, 4, 4), true};
  EXPECT_THROW(CirmMseLoss(a, c), ShapeError);
  Cirm raw = a;
  raw.compressed = false;
  EXPECT_THROW(CirmMseLoss(raw, a), ShapeError);
}

TEST(CirmMseLossTest, GradientMatchesFiniteDifferences) {
  // Quadratic loss: central differences are exact up to roundoff, so a larger
  // step isolates the analytic gradient at the 1e-8 level.
  GradCheckOptions opts;
  opts.step = 1e-3;
  for (uint64_t s = 0; s < 10; ++s) {
    Cirm pred{RandomMatrix(4, 5, s), RandomMatrix(4, 5, s + 1), true};
    Cirm target{RandomMatrix(4, 5, s + 2), RandomMatrix(4, 5, s + 3), true};
    auto r = GradCheckScalar(
        "cirm_mse", {&pred.real, &pred.imag}, [&] { return CirmMseLoss(pred, target); },
        [&] {
          Cirm g;
          CirmMseLoss(pred, target, &g);
          return std::vector<Matrix>{g.real, g.imag};
        },
        s, opts);
    EXPECT_LE(r.max_rel_error, 1e-8);
  }
}

ModelParams Tiny(uint64_t seed) { return InitParams(testing::TinyConfig(), seed); }

TEST(AdamTest, ZeroGradientLeavesParameters) {
  ModelParams p = Tiny(1);
  const ModelParams before = Tiny(1);
  p.ZeroGrad();
  Adam adam(TrainConfig{});
  for (int i = 0; i < 5; ++i) adam.Step(&p);
  std::vector<const Matrix*> a, b;
  p.Visit([&](const Parameter& q) { a.push_back(&q.value); });
  before.Visit([&](const Parameter& q) { b.push_back(&q.value); });
  for (size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(BitEqual(*a[i], *b[i]));
  EXPECT_EQ(adam.steps(), 5);
}

TEST(AdamTest, ConstantGradientStepApproachesLearningRate) {
  ModelParams p = ZeroParams(testing::TinyConfig());
  p.ZeroGrad();
  p.subband.fc_bias.grad << 0.37, -2.5;
  TrainConfig cfg;
  Adam adam(cfg);
  Matrix prev = p.subband.fc_bias.value;
  for (int i = 0; i < 3000; ++i) {
    prev = p.subband.fc_bias.value;
    adam.Step(&p);
  }
  const Matrix step = p.subband.fc_bias.value - prev;
  EXPECT_NEAR(-step(0, 0) / cfg.learning_rate, 1.0, 0.01);
  EXPECT_NEAR(step(0, 1) / cfg.learning_rate, 1.0, 0.01);
}

TEST(TrainLoopTest, DeterministicAndFinite) {
  TrainingData data;
  data.clean = {Gaussian(2000, 1, 0.1)};
  data.noise = {Gaussian(2000, 2, 0.1)};
  TrainConfig cfg;
  cfg.steps = 4;
  cfg.chunk_frames = 12;
  const ModelConfig model = testing::TinyConfig();
  TrainResult a = TrainLoop(cfg, data, MixSpec{}, model, 1);
  TrainResult b = TrainLoop(cfg, data, MixSpec{}, model, 3);
  ASSERT_EQ(a.losses.size(), 4u);
  EXPECT_EQ(a.losses, b.losses);
  for (double l : a.losses) EXPECT_TRUE(std::isfinite(l));
  std::vector<const Matrix*> va, vb;
  a.params.Visit([&](const Parameter& q) { va.push_back(&q.value); });
  b.params.Visit([&](const Parameter& q) { vb.push_back(&q.value); });
  for (size_t i = 0; i < va.size(); ++i) EXPECT_TRUE(BitEqual(*va[i], *vb[i]));

  cfg.steps = 0;
  TrainResult z = TrainLoop(cfg, data, MixSpec{}, model);
  EXPECT_TRUE(z.losses.empty());
  EXPECT_TRUE(BitEqual(z.params.subband.fc_weight.value, Tiny(0).subband.fc_weight.value));
  EXPECT_THROW(TrainLoop(cfg, TrainingData{}, MixSpec{}, model), IoError);
}

}  // namespace
}  // namespace fsca
