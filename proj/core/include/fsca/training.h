// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_TRAINING_H_
#define FSCA_TRAINING_H_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "fsca/audio.h"
#include "fsca/cirm.h"
#include "fsca/config.h"
#include "fsca/model.h"

namespace fsca {

struct MixResult {
  Waveform noisy;
  Waveform target;  // reverberant clean when an RIR was applied
  Waveform noise;   // scaled noise actually added (after peak normalization)
  double peak_scale = 1.0;
};

// Loops (or trims) `x` to exactly `length` samples.
std::vector<double> FitLength(const std::vector<double>& x, size_t length);

// Full convolution truncated to the length of `x`.
std::vector<double> ConvolveTruncated(const std::vector<double>& x,
                                      const std::vector<double>& h);

double MeanPower(const std::vector<double>& x);

// Mixes clean and noise at `snr_db`. With an RIR the target is the
// reverberant clean. If the mixture peak exceeds 1, noisy, target and noise
// are scaled by the same factor to peak 0.99.
MixResult Mix(const Waveform& clean, const Waveform& noise, double snr_db,
              const Waveform* rir = nullptr);

struct TrainingData {
  std::vector<Waveform> clean;
  std::vector<Waveform> noise;
  std::vector<Waveform> rirs;  // optional
};

// Dynamic mixing: every draw picks a random clean crop, noise segment, SNR and
// (with probability rir_probability, when RIRs exist) an impulse response.
class DynamicMixer {
 public:
  DynamicMixer(const TrainingData* data, const MixSpec& spec, Index length);

  struct Draw {
    MixResult mix;
    double snr_db = 0.0;
    bool used_rir = false;
  };
  Draw Next();

 private:
  std::vector<double> Crop(const std::vector<double>& x, bool pad);

  const TrainingData* data_;
  MixSpec spec_;
  Index length_;
  std::mt19937_64 rng_;
};

// Mean squared error over both components and all F x T entries of two
// compressed masks. `grad`, when given, receives d(loss)/d(pred).
double CirmMseLoss(const Cirm& pred, const Cirm& target, Cirm* grad = nullptr);

// Adam with bias correction. Updated values are rounded to float so that
// float32 checkpoints store them exactly.
class Adam {
 public:
  explicit Adam(const TrainConfig& cfg);

  void Step(ModelParams* p);
  int64_t steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

// Compressed oracle cIRM training target for one (noisy, clean) pair.
Cirm TrainingTarget(const ComplexSpectrogram& noisy, const ComplexSpectrogram& clean,
                    const CirmCompression& c);

struct TrainResult {
  ModelParams params;
  std::vector<double> losses;  // loss before each update
};

using StepCallback = std::function<void(int step, double loss)>;

// Batch size one: each step draws a T-frame chunk, computes the compressed
// cIRM target, runs forward/backward and one Adam update.
TrainResult TrainLoop(const TrainConfig& cfg, const TrainingData& data,
                      const MixSpec& mix, const ModelConfig& model, int threads = 1,
                      const StepCallback& on_step = {});

}  // namespace fsca

#endif  // FSCA_TRAINING_H_
