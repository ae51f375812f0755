// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_AUDIO_H_
#define FSCA_AUDIO_H_

#include <string>
#include <vector>

#include "fsca/tensor.h"

namespace fsca {

inline constexpr int kDefaultSampleRate = 16000;
// Upper clip bound applied before 16-bit quantization.
inline constexpr double kMaxPcmAmplitude = 32767.0 / 32768.0;

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  Index size() const { return static_cast<Index>(samples.size()); }
};

// 16-bit PCM mono RIFF/WAVE, no resampling. Throws IoError when the file
// cannot be read and FormatError for anything other than PCM16 mono at
// `expected_rate`.
Waveform ReadWav(const std::string& path, int expected_rate = kDefaultSampleRate);
// Samples are clipped to [-1, 32767/32768] and rounded to the nearest step.
void WriteWav(const Waveform& w, const std::string& path);

// Clips every sample into the 16-bit representable range.
void ClipToPcmRange(Waveform* w);

struct StftConfig {
  int n_fft = 512;
  int hop = 256;

  int bins() const { return n_fft / 2 + 1; }
  // Throws ConfigError unless n_fft is a power of two and hop = n_fft / 2.
  void Validate() const;
  Index FrameCount(Index num_samples) const;
  Index SignalLength(Index frames) const { return n_fft + (frames - 1) * hop; }
};

struct ComplexSpectrogram {
  Matrix real;  // [F, T]
  Matrix imag;  // [F, T]

  Index bins() const { return real.rows(); }
  Index frames() const { return real.cols(); }
};

// Periodic (DFT-even) Hann window: 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> PeriodicHann(int n_fft);

// Frames start at sample 0 with no padding; T = 1 + (len - n_fft) / hop.
ComplexSpectrogram Stft(const Waveform& w, const StftConfig& cfg);

// Windowed overlap-add normalized by the sum of shifted squared windows.
// Output length n_fft + (T - 1) hop.
Waveform Istft(const ComplexSpectrogram& spec, const StftConfig& cfg,
               int sample_rate = kDefaultSampleRate);

Matrix Magnitude(const ComplexSpectrogram& spec);

}  // namespace fsca

#endif  // FSCA_AUDIO_H_
