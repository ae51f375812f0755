// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_MODEL_H_
#define FSCA_MODEL_H_

#include <cstdint>
#include <optional>

#include "fsca/audio.h"
#include "fsca/cirm.h"
#include "fsca/config.h"
#include "fsca/fsca.h"
#include "fsca/fullband.h"
#include "fsca/subband_model.h"

namespace fsca {

// G_full -> A_f2s -> G_sub. `fsca` is absent in FusionMode::kConcat.
struct ModelParams {
  ModelConfig config;
  FullbandParams fullband;
  std::optional<FscaParams> fsca;
  SubbandModelParams subband;

  template <typename Fn>
  void Visit(Fn&& fn) {
    fullband.Visit(fn);
    if (fsca) fsca->Visit(fn);
    subband.Visit(fn);
  }
  template <typename Fn>
  void Visit(Fn&& fn) const {
    fullband.Visit(fn);
    if (fsca) fsca->Visit(fn);
    subband.Visit(fn);
  }

  void ZeroGrad();
};

// Weights uniform(±1/sqrt(fan_in)), biases 0, LSTM forget bias 1, PReLU 0.25,
// gLN gamma 1 / beta 0. Deterministic in `seed`.
ModelParams InitParams(const ModelConfig& cfg, uint64_t seed);
// Same shapes, every value zero.
ModelParams ZeroParams(const ModelConfig& cfg);

// Compressed-domain mask prediction from the magnitude spectrogram [F, T].
// Output is independent of `threads`.
Cirm PredictMask(const ModelParams& p, const Matrix& magnitude, int threads = 1);

// MSE between the predicted and a compressed target mask, averaged over
// both components and all F x T entries.
double SequenceLoss(const ModelParams& p, const Matrix& magnitude,
                    const Cirm& target, int threads = 1);

// SequenceLoss plus backward: d(loss)/d(param) is added into every
// Parameter::grad. Per-frequency contributions are reduced in ascending
// frequency order, so gradients are bit-identical for any `threads`.
double AccumulateGradients(ModelParams& p, const Matrix& magnitude,
                           const Cirm& target, int threads = 1);

// Decompress, apply to the noisy spectrum, invert and clip.
Waveform ReconstructFromMask(const ComplexSpectrogram& noisy,
                             const Cirm& compressed_mask, const ModelConfig& cfg);

// Waveform in, enhanced waveform out, length n_fft + (T - 1) hop.
Waveform Enhance(const Waveform& noisy, const ModelParams& p, int threads = 1);

}  // namespace fsca

#endif  // FSCA_MODEL_H_
