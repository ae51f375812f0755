// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/audio.h"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace fsca {
namespace {

constexpr double kOlaEpsilon = 1e-10;

// fftw_malloc'd scratch buffer.
template <typename T>
struct FftwBuffer {
  explicit FftwBuffer(size_t n) : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * n))) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* ptr;
};

// Real <-> half-complex plans for one transform size. Planning is not
// thread-safe in FFTW, so plans are created once under a lock; executing a
// plan on fresh fftw_malloc'd arrays is.
class FftPlans {
 public:
  explicit FftPlans(int n) : n_(n) {
    FftwBuffer<double> real(n);
    FftwBuffer<fftw_complex> spec(n / 2 + 1);
    forward_ = fftw_plan_dft_r2c_1d(n, real.ptr, spec.ptr, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(n, spec.ptr, real.ptr, FFTW_ESTIMATE);
  }
  ~FftPlans() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void Forward(double* in, fftw_complex* out) const {
    fftw_execute_dft_r2c(forward_, in, out);
  }
  // Unnormalized; `in` is destroyed.
  void Inverse(fftw_complex* in, double* out) const {
    fftw_execute_dft_c2r(inverse_, in, out);
  }
  int size() const { return n_; }

 private:
  int n_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

const FftPlans& PlansFor(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<FftPlans>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlans>(n);
  return *slot;
}

}  // namespace

void StftConfig::Validate() const {
  if (n_fft < 2 || (n_fft & (n_fft - 1)) != 0)
    throw ConfigError("n_fft must be a power of two, got " + std::to_string(n_fft));
  if (hop != n_fft / 2)
    throw ConfigError("hop must equal n_fft / 2 (" + std::to_string(n_fft / 2) +
                      "), got " + std::to_string(hop));
}

Index StftConfig::FrameCount(Index num_samples) const {
  if (num_samples < n_fft) return 0;
  return 1 + (num_samples - n_fft) / hop;
}

std::vector<double> PeriodicHann(int n_fft) {
  std::vector<double> w(n_fft);
  for (int i = 0; i < n_fft; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n_fft);
  return w;
}

ComplexSpectrogram Stft(const Waveform& w, const StftConfig& cfg) {
  cfg.Validate();
  if (w.size() < cfg.n_fft) {
    throw ShapeError("Stft: signal of " + std::to_string(w.size()) +
                     " samples is shorter than one frame (" +
                     std::to_string(cfg.n_fft) + ")");
  }
  const Index frames = cfg.FrameCount(w.size());
  const int bins = cfg.bins();
  const std::vector<double> window = PeriodicHann(cfg.n_fft);
  const FftPlans& plans = PlansFor(cfg.n_fft);
  FftwBuffer<double> frame(cfg.n_fft);
  FftwBuffer<fftw_complex> spec(bins);

  ComplexSpectrogram out;
  out.real.resize(bins, frames);
  out.imag.resize(bins, frames);
  for (Index t = 0; t < frames; ++t) {
    const double* src = w.samples.data() + t * cfg.hop;
    for (int i = 0; i < cfg.n_fft; ++i) frame.ptr[i] = src[i] * window[i];
    plans.Forward(frame.ptr, spec.ptr);
    for (int k = 0; k < bins; ++k) {
      out.real(k, t) = spec.ptr[k][0];
      out.imag(k, t) = spec.ptr[k][1];
    }
  }
  return out;
}

Waveform Istft(const ComplexSpectrogram& spec, const StftConfig& cfg,
               int sample_rate) {
  cfg.Validate();
  if (spec.bins() != cfg.bins()) {
    throw ShapeError("Istft: spectrogram has " + std::to_string(spec.bins()) +
                     " bins, config expects " + std::to_string(cfg.bins()));
  }
  ExpectShape(spec.imag, spec.real.rows(), spec.real.cols(), "Istft imag");
  Waveform out;
  out.sample_rate = sample_rate;
  const Index frames = spec.frames();
  if (frames == 0) return out;

  const Index length = cfg.SignalLength(frames);
  const std::vector<double> window = PeriodicHann(cfg.n_fft);
  const FftPlans& plans = PlansFor(cfg.n_fft);
  FftwBuffer<fftw_complex> bins(cfg.bins());
  FftwBuffer<double> frame(cfg.n_fft);
  std::vector<double> acc(length, 0.0), norm(length, 0.0);
  const double scale = 1.0 / cfg.n_fft;
  for (Index t = 0; t < frames; ++t) {
    for (int k = 0; k < cfg.bins(); ++k) {
      bins.ptr[k][0] = spec.real(k, t);
      bins.ptr[k][1] = spec.imag(k, t);
    }
    plans.Inverse(bins.ptr, frame.ptr);
    const Index start = t * cfg.hop;
    for (int i = 0; i < cfg.n_fft; ++i) {
      acc[start + i] += frame.ptr[i] * scale * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }
  out.samples.resize(length);
  for (Index i = 0; i < length; ++i)
    out.samples[i] = norm[i] > kOlaEpsilon ? acc[i] / norm[i] : 0.0;
  return out;
}

Matrix Magnitude(const ComplexSpectrogram& spec) {
  ExpectShape(spec.imag, spec.real.rows(), spec.real.cols(), "Magnitude imag");
  return (spec.real.array().square() + spec.imag.array().square()).sqrt().matrix();
}

}  // namespace fsca
