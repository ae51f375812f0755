// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/training.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsca/init.h"

namespace fsca {
namespace {

constexpr double kPeakLimit = 1.0;
constexpr double kPeakTarget = 0.99;
constexpr int kMaxCropAttempts = 100;

double Peak(const std::vector<double>& x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

void Scale(std::vector<double>* x, double s) {
  for (double& v : *x) v *= s;
}

}  // namespace

std::vector<double> FitLength(const std::vector<double>& x, size_t length) {
  if (x.empty()) throw FormatError("FitLength: empty signal");
  std::vector<double> out(length);
  for (size_t i = 0; i < length; ++i) out[i] = x[i % x.size()];
  return out;
}

std::vector<double> ConvolveTruncated(const std::vector<double>& x,
                                      const std::vector<double>& h) {
  std::vector<double> y(x.size(), 0.0);
  for (size_t n = 0; n < x.size(); ++n) {
    const size_t taps = std::min(h.size(), n + 1);
    double acc = 0.0;
    for (size_t k = 0; k < taps; ++k) acc += h[k] * x[n - k];
    y[n] = acc;
  }
  return y;
}

double MeanPower(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

MixResult Mix(const Waveform& clean, const Waveform& noise, double snr_db,
              const Waveform* rir) {
  if (clean.sample_rate != noise.sample_rate ||
      (rir != nullptr && rir->sample_rate != clean.sample_rate)) {
    throw FormatError("Mix: sample rates differ");
  }
  if (!std::isfinite(snr_db)) throw ConfigError("Mix: SNR must be finite");
  if (clean.samples.empty()) throw FormatError("Mix: empty clean signal");
  if (noise.samples.empty()) throw FormatError("Mix: empty noise signal");

  MixResult r;
  r.target.sample_rate = r.noisy.sample_rate = r.noise.sample_rate = clean.sample_rate;
  r.target.samples = rir != nullptr ? ConvolveTruncated(clean.samples, rir->samples)
                                    : clean.samples;
  r.noise.samples = FitLength(noise.samples, clean.samples.size());
  const double p_clean = MeanPower(r.target.samples);
  const double p_noise = MeanPower(r.noise.samples);
  if (p_clean == 0.0) throw FormatError("Mix: clean signal has zero power");
  if (p_noise == 0.0) throw FormatError("Mix: noise signal has zero power");

  Scale(&r.noise.samples, std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0))));
  r.noisy.samples.resize(r.target.samples.size());
  for (size_t i = 0; i < r.noisy.samples.size(); ++i)
    r.noisy.samples[i] = r.target.samples[i] + r.noise.samples[i];

  const double peak = Peak(r.noisy.samples);
  if (peak > kPeakLimit) {
    r.peak_scale = kPeakTarget / peak;
    Scale(&r.noisy.samples, r.peak_scale);
    Scale(&r.target.samples, r.peak_scale);
    Scale(&r.noise.samples, r.peak_scale);
  }
  return r;
}

DynamicMixer::DynamicMixer(const TrainingData* data, const MixSpec& spec, Index length)
    : data_(data), spec_(spec), length_(length), rng_(spec.seed) {
  spec_.Validate();
  if (data_->clean.empty()) throw IoError("DynamicMixer: no clean utterances");
  if (data_->noise.empty()) throw IoError("DynamicMixer: no noise clips");
  if (length_ <= 0) throw ConfigError("DynamicMixer: chunk length must be positive");
}

std::vector<double> DynamicMixer::Crop(const std::vector<double>& x, bool pad) {
  const size_t len = static_cast<size_t>(length_);
  if (x.size() > len) {
    std::uniform_int_distribution<size_t> start(0, x.size() - len);
    const size_t s = start(rng_);
    return {x.begin() + static_cast<std::ptrdiff_t>(s),
            x.begin() + static_cast<std::ptrdiff_t>(s + len)};
  }
  if (!pad) return FitLength(x, len);
  std::vector<double> out(x);
  out.resize(len, 0.0);
  return out;
}

DynamicMixer::Draw DynamicMixer::Next() {
  std::uniform_int_distribution<size_t> pick_clean(0, data_->clean.size() - 1);
  std::uniform_int_distribution<size_t> pick_noise(0, data_->noise.size() - 1);
  std::uniform_real_distribution<double> snr(spec_.snr_lo, spec_.snr_hi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  for (int attempt = 0; attempt < kMaxCropAttempts; ++attempt) {
    const Waveform& clean_src = data_->clean[pick_clean(rng_)];
    const Waveform& noise_src = data_->noise[pick_noise(rng_)];
    Draw d;
    d.snr_db = spec_.snr_lo == spec_.snr_hi ? spec_.snr_lo : snr(rng_);
    d.used_rir = coin(rng_) < spec_.rir_probability && !data_->rirs.empty();
    const Waveform* rir = nullptr;
    if (d.used_rir) {
      std::uniform_int_distribution<size_t> pick_rir(0, data_->rirs.size() - 1);
      rir = &data_->rirs[pick_rir(rng_)];
    }
    Waveform clean{Crop(clean_src.samples, true), clean_src.sample_rate};
    Waveform noise{Crop(noise_src.samples, false), noise_src.sample_rate};
    const std::vector<double> eff =
        rir != nullptr ? ConvolveTruncated(clean.samples, rir->samples) : clean.samples;
    if (MeanPower(eff) == 0.0 || MeanPower(noise.samples) == 0.0) continue;
    d.mix = Mix(clean, noise, d.snr_db, rir);
    return d;
  }
  throw FormatError("DynamicMixer: could not draw a chunk with nonzero power");
}

double CirmMseLoss(const Cirm& pred, const Cirm& target, Cirm* grad) {
  if (!pred.compressed || !target.compressed)
    throw ShapeError("CirmMseLoss: both masks must be compressed");
  ExpectShape(pred.imag, pred.real.rows(), pred.real.cols(), "CirmMseLoss pred imag");
  ExpectShape(target.real, pred.real.rows(), pred.real.cols(), "CirmMseLoss target real");
  ExpectShape(target.imag, pred.real.rows(), pred.real.cols(), "CirmMseLoss target imag");
  const double count = 2.0 * static_cast<double>(pred.real.size());
  if (count == 0.0) throw ShapeError("CirmMseLoss: empty masks");
  const Matrix dr = pred.real - target.real;
  const Matrix di = pred.imag - target.imag;
  if (grad != nullptr) {
    grad->compressed = true;
    grad->real = dr * (2.0 / count);
    grad->imag = di * (2.0 / count);
  }
  return (dr.squaredNorm() + di.squaredNorm()) / count;
}

Adam::Adam(const TrainConfig& cfg)
    : lr_(cfg.learning_rate), beta1_(cfg.beta1), beta2_(cfg.beta2), eps_(cfg.epsilon) {}

void Adam::Step(ModelParams* p) {
  if (m_.empty()) {
    p->Visit([&](const Parameter& x) {
      m_.push_back(Matrix::Zero(x.value.rows(), x.value.cols()));
      v_.push_back(Matrix::Zero(x.value.rows(), x.value.cols()));
    });
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  size_t i = 0;
  p->Visit([&](Parameter& x) {
    Matrix& m = m_[i];
    Matrix& v = v_[i];
    ++i;
    if (x.grad.size() != x.value.size()) return;  // never touched by backward
    for (Index j = 0; j < x.value.size(); ++j) {
      const double g = x.grad.data()[j];
      double& mj = m.data()[j];
      double& vj = v.data()[j];
      mj = beta1_ * mj + (1.0 - beta1_) * g;
      vj = beta2_ * vj + (1.0 - beta2_) * g * g;
      const double update = lr_ * (mj / c1) / (std::sqrt(vj / c2) + eps_);
      x.value.data()[j] = RoundToFloat(x.value.data()[j] - update);
    }
  });
}

Cirm TrainingTarget(const ComplexSpectrogram& noisy, const ComplexSpectrogram& clean,
                    const CirmCompression& c) {
  return Compress(ComputeCirm(noisy, clean), c);
}

TrainResult TrainLoop(const TrainConfig& cfg, const TrainingData& data,
                      const MixSpec& mix, const ModelConfig& model, int threads,
                      const StepCallback& on_step) {
  cfg.Validate();
  model.Validate();
  const StftConfig stft = model.stft();
  DynamicMixer mixer(&data, mix, stft.SignalLength(cfg.chunk_frames));
  TrainResult r{InitParams(model, cfg.seed), {}};
  Adam adam(cfg);
  r.losses.reserve(cfg.steps);
  for (int step = 0; step < cfg.steps; ++step) {
    DynamicMixer::Draw d = mixer.Next();
    const ComplexSpectrogram y = Stft(d.mix.noisy, stft);
    const ComplexSpectrogram s = Stft(d.mix.target, stft);
    const Cirm target = TrainingTarget(y, s, model.cirm);
    r.params.ZeroGrad();
    const double loss = AccumulateGradients(r.params, Magnitude(y), target, threads);
    if (!std::isfinite(loss))
      throw Error("TrainLoop: non-finite loss at step " + std::to_string(step));
    adam.Step(&r.params);
    r.losses.push_back(loss);
    if (on_step) on_step(step, loss);
  }
  return r;
}

}  // namespace fsca
