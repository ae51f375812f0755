// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "fsca/audio.h"
#include "fsca/fsca.h"
#include "fsca/fullband.h"
#include "fsca/model.h"
#include "fsca/ops.h"
#include "fsca/subband.h"
#include "fsca/subband_model.h"
#include "fsca/training.h"

namespace fsca {
namespace {

Waveform Noise(Index n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.1);
  Waveform w;
  w.samples.resize(n);
  for (double& s : w.samples) s = dist(rng);
  return w;
}

Matrix Random(Index rows, Index cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

ModelConfig Tiny() {
  ModelConfig c;
  c.n_fft = 64;
  c.hop = 32;
  c.n = 2;
  c.tcn.groups = 1;
  c.tcn.blocks_per_group = 2;
  c.tcn.dilations = {1, 2};
  c.tcn.hidden = 16;
  c.attention.heads = 2;
  c.attention.d_model = 16;
  c.lstm.hidden = 16;
  return c;
}

void BM_Stft(benchmark::State& state) {
  const Waveform x = Noise(state.range(0), 1);
  const StftConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(Stft(x, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Stft)->Arg(16000)->Arg(160000);

void BM_StftRoundTrip(benchmark::State& state) {
  const Waveform x = Noise(16000, 2);
  const StftConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(Istft(Stft(x, cfg), cfg));
}
BENCHMARK(BM_StftRoundTrip);

// Default-size extractor on 1 s of audio (61 frames).
void BM_FullbandForward(benchmark::State& state) {
  const ModelConfig cfg;
  Initializer init(3);
  const FullbandParams p = MakeFullband(cfg, &init);
  const Matrix x = Random(cfg.bins(), state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(FullbandForward(x, p));
}
BENCHMARK(BM_FullbandForward)->Arg(61)->Unit(benchmark::kMillisecond);

void BM_FscaForwardAll(benchmark::State& state) {
  const ModelConfig cfg;
  Initializer init(5);
  const FscaParams p = MakeFsca(cfg, &init);
  const Matrix mag = Random(cfg.bins(), 61, 6);
  const std::vector<SubbandUnit> units = Unfold(mag, cfg.n);
  const FullbandBroadcast g =
      BroadcastFullband(std::make_shared<const Matrix>(Random(cfg.bins(), 61, 7)), cfg.bins());
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(FscaForwardAll(units, g, p, threads));
}
BENCHMARK(BM_FscaForwardAll)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_LstmLayer(benchmark::State& state) {
  const Index frames = 61, in = 31, hidden = state.range(0);
  const Matrix x = Random(frames, in, 8), wih = Random(in, 4 * hidden, 9);
  const Matrix whh = Random(hidden, 4 * hidden, 10), b = Random(1, 4 * hidden, 11);
  for (auto _ : state) {
    Tape t(false);
    benchmark::DoNotOptimize(t.Value(ops::LstmLayer(t, t.Ref(x, false), t.Ref(wih, false),
                                                    t.Ref(whh, false), t.Ref(b, false))));
  }
}
BENCHMARK(BM_LstmLayer)->Arg(16)->Arg(384);

void BM_EnhanceTiny(benchmark::State& state) {
  const ModelParams p = InitParams(Tiny(), 12);
  const Waveform x = Noise(16000, 13);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Enhance(x, p, threads));
}
BENCHMARK(BM_EnhanceTiny)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EnhanceDefault(benchmark::State& state) {
  const ModelParams p = InitParams(ModelConfig{}, 14);
  const Waveform x = Noise(16000, 15);
  for (auto _ : state) benchmark::DoNotOptimize(Enhance(x, p, 4));
}
BENCHMARK(BM_EnhanceDefault)->Unit(benchmark::kMillisecond)->Iterations(3);

// One optimizer step on the tiny model: forward, backward, Adam.
void BM_TrainStepTiny(benchmark::State& state) {
  const ModelConfig cfg = Tiny();
  ModelParams p = InitParams(cfg, 16);
  const Waveform clean = Noise(cfg.stft().SignalLength(32), 17);
  const MixResult m = Mix(clean, Noise(2000, 18), 0.0);
  const ComplexSpectrogram Y = Stft(m.noisy, cfg.stft()), S = Stft(m.target, cfg.stft());
  const Matrix mag = Magnitude(Y);
  const Cirm target = TrainingTarget(Y, S, cfg.cirm);
  Adam adam{TrainConfig{}};
  for (auto _ : state) {
    p.ZeroGrad();
    benchmark::DoNotOptimize(AccumulateGradients(p, mag, target, 1));
    adam.Step(&p);
  }
}
BENCHMARK(BM_TrainStepTiny)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace fsca

BENCHMARK_MAIN();
