// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_CONFIG_H_
#define FSCA_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fsca/audio.h"
#include "fsca/cirm.h"
#include "fsca/ops.h"

namespace fsca {

enum class FusionMode {
  kAttention,        // FSCA only
  kConcat,           // unit ++ fullband row (no FSCA)
  kAttentionConcat,  // FSCA output ++ fullband row
};

const char* ToString(FusionMode mode);
FusionMode ParseFusionMode(const std::string& s);

struct TcnConfig {
  int groups = 2;
  int blocks_per_group = 4;
  int kernel = 3;
  std::vector<int> dilations = {1, 2, 5, 9};
  int hidden = 512;

  bool operator==(const TcnConfig&) const = default;
};

struct AttentionConfig {
  int heads = 8;
  int d_model = 256;
  ops::AttentionMask mask = ops::AttentionMask::kFull;
  int ffn_ratio = 4;

  bool operator==(const AttentionConfig&) const = default;
};

struct LstmConfig {
  int hidden = 384;
  int layers = 2;

  bool operator==(const LstmConfig&) const = default;
};

struct ModelConfig {
  int sample_rate = kDefaultSampleRate;
  int n_fft = 512;
  int hop = 256;
  int n = 15;
  TcnConfig tcn;
  AttentionConfig attention;
  LstmConfig lstm;
  CirmCompression cirm;
  FusionMode fusion_mode = FusionMode::kAttention;

  int bins() const { return n_fft / 2 + 1; }
  int unit_width() const { return 2 * n + 1; }
  bool uses_attention() const { return fusion_mode != FusionMode::kConcat; }
  bool uses_concat() const { return fusion_mode != FusionMode::kAttention; }
  // Width of each frame fed to the subband LSTM.
  int subband_input_width() const { return unit_width() + (uses_concat() ? 1 : 0); }
  StftConfig stft() const { return StftConfig{n_fft, hop}; }
  // Throws ConfigError describing the first violated invariant.
  void Validate() const;

  bool operator==(const ModelConfig&) const = default;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int steps = 1000;
  int chunk_frames = 192;
  uint64_t seed = 0;

  void Validate() const;
};

struct MixSpec {
  double snr_lo = -5.0;
  double snr_hi = 20.0;
  double rir_probability = 0.75;
  uint64_t seed = 0;

  void Validate() const;
};

// One JSON document: {"model": {...}, "train": {...}, "mix": {...}}.
// Every section and key is optional (defaults above); unknown keys are errors.
struct ExperimentConfig {
  ModelConfig model;
  TrainConfig train;
  MixSpec mix;
};

// Parse and validate. Throws ConfigError.
ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);
ModelConfig ParseModelConfig(const std::string& json_text);

std::string ToJson(const ModelConfig& cfg);
std::string ToJson(const ExperimentConfig& cfg);

}  // namespace fsca

#endif  // FSCA_CONFIG_H_
