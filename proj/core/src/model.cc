// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/model.h"

#include <cmath>
#include <memory>
#include <unordered_map>

#include "fsca/ops.h"
#include "fsca/parallel.h"
#include "fsca/subband.h"

namespace fsca {
namespace {

using GradSink = std::unordered_map<const Parameter*, Parameter*>;

ModelParams Build(const ModelConfig& cfg, Initializer* init) {
  cfg.Validate();
  ModelParams p;
  p.config = cfg;
  p.fullband = MakeFullband(cfg, init);
  if (cfg.uses_attention()) p.fsca = MakeFsca(cfg, init);
  p.subband = MakeSubbandModel(cfg, init);
  return p;
}

void Flush(const Tape& t, const GradSink& sink) {
  for (const auto& [param, grad] : t.ParamGrads()) sink.at(param)->grad += *grad;
}

struct FrequencyPass {
  explicit FrequencyPass(bool grads) : tape(grads) {}
  Tape tape;
  Var fullband_col;
  double loss = 0.0;
};

// Shared forward for inference, loss evaluation and training. The fullband
// extractor and the query projection run once on `main`; every frequency
// then runs FSCA + subband model on its own tape. With a sink, per-frequency
// gradients are folded back in ascending frequency order before the main
// reverse pass.
double Run(const ModelParams& p, const Matrix& magnitude, int threads,
           const Cirm* target, const GradSink* sink, Cirm* mask_out) {
  const ModelConfig& cfg = p.config;
  const Index bins = cfg.bins(), frames = magnitude.cols();
  ExpectShape(magnitude, bins, frames, "model input magnitude");
  if (target != nullptr) {
    if (!target->compressed) throw ShapeError("SequenceLoss: target must be compressed");
    ExpectShape(target->real, bins, frames, "target mask real");
    ExpectShape(target->imag, bins, frames, "target mask imag");
  }
  const bool grads = sink != nullptr;

  Tape main(grads);
  Var x = main.Ref(magnitude, false);
  Var fullband = FullbandForward(main, x, p.fullband);
  ExpectShape(main.Value(fullband), bins, frames, "fullband embedding");
  Var fullband_tm = ops::Transpose(main, fullband);
  Var query;
  if (p.fsca) query = FscaQuery(main, fullband_tm, *p.fsca);
  const Matrix& g_tm = main.Value(fullband_tm);
  const Matrix* q = query.valid() ? &main.Value(query) : nullptr;

  if (mask_out != nullptr) {
    mask_out->compressed = true;
    mask_out->real.resize(bins, frames);
    mask_out->imag.resize(bins, frames);
  }
  const double scale = 1.0 / (2.0 * static_cast<double>(bins * frames));

  auto run_frequency = [&](Index f, FrequencyPass* pass) {
    Tape& t = pass->tape;
    Var unit = t.Constant(UnfoldTimeMajor(magnitude, cfg.n, f));
    ExpectShape(t.Value(unit), frames, cfg.unit_width(), "subband unit");
    Var in = unit;
    if (p.fsca) in = FscaFuse(t, unit, t.Ref(*q, true), *p.fsca);
    if (cfg.uses_concat()) {
      pass->fullband_col = t.Input(g_tm.col(f), true);
      in = ops::ConcatCols(t, in, pass->fullband_col);
    }
    ExpectShape(t.Value(in), frames, cfg.subband_input_width(), "fusion embedding");
    Var out = SubbandForward(t, in, p.subband);
    const Matrix& m = t.Value(out);
    ExpectShape(m, frames, 2, "subband output");
    if (mask_out != nullptr) {
      mask_out->real.row(f) = m.col(0).transpose();
      mask_out->imag.row(f) = m.col(1).transpose();
    }
    if (target != nullptr) {
      Matrix diff(frames, 2);
      diff.col(0) = m.col(0) - target->real.row(f).transpose();
      diff.col(1) = m.col(1) - target->imag.row(f).transpose();
      double sum = 0.0;
      for (Index i = 0; i < diff.size(); ++i) sum += diff.data()[i] * diff.data()[i];
      pass->loss = sum;
      if (grads) t.Backward(out, diff * (2.0 * scale));
    }
  };

  double total = 0.0;
  if (!grads) {
    std::vector<double> losses(bins, 0.0);
    ParallelFor(bins, threads, [&](Index f) {
      FrequencyPass pass(false);
      run_frequency(f, &pass);
      losses[f] = pass.loss;
    });
    for (double l : losses) total += l;
    return total * scale;
  }

  // Waves of `threads` frequencies keep memory bounded while the reduction
  // order stays ascending in f.
  const Index wave = std::max(threads, 1);
  for (Index start = 0; start < bins; start += wave) {
    const Index count = std::min(wave, bins - start);
    std::vector<std::unique_ptr<FrequencyPass>> passes(count);
    ParallelFor(count, threads, [&](Index i) {
      passes[i] = std::make_unique<FrequencyPass>(true);
      run_frequency(start + i, passes[i].get());
    });
    for (Index i = 0; i < count; ++i) {
      const Index f = start + i;
      FrequencyPass& pass = *passes[i];
      total += pass.loss;
      Flush(pass.tape, *sink);
      if (q != nullptr) {
        Matrix dq = pass.tape.GradOf(*q);
        if (dq.size() != 0) main.Grad(query) += dq;
      }
      if (pass.fullband_col.valid() && pass.tape.HasGrad(pass.fullband_col))
        main.Grad(fullband_tm).col(f) += pass.tape.Grad(pass.fullband_col);
    }
  }
  main.Backward();
  Flush(main, *sink);
  return total * scale;
}

}  // namespace

void ModelParams::ZeroGrad() {
  Visit([](Parameter& p) { p.ZeroGrad(); });
}

ModelParams InitParams(const ModelConfig& cfg, uint64_t seed) {
  Initializer init(seed);
  return Build(cfg, &init);
}

ModelParams ZeroParams(const ModelConfig& cfg) { return Build(cfg, nullptr); }

Cirm PredictMask(const ModelParams& p, const Matrix& magnitude, int threads) {
  Cirm mask;
  Run(p, magnitude, threads, nullptr, nullptr, &mask);
  return mask;
}

double AccumulateGradients(ModelParams& p, const Matrix& magnitude,
                           const Cirm& target, int threads) {
  GradSink sink;
  p.Visit([&sink](Parameter& param) {
    if (param.grad.rows() != param.value.rows() || param.grad.cols() != param.value.cols())
      param.ZeroGrad();
    sink.emplace(&param, &param);
  });
  return Run(p, magnitude, threads, &target, &sink, nullptr);
}

double SequenceLoss(const ModelParams& p, const Matrix& magnitude,
                    const Cirm& target, int threads) {
  return Run(p, magnitude, threads, &target, nullptr, nullptr);
}

Waveform ReconstructFromMask(const ComplexSpectrogram& noisy,
                             const Cirm& compressed_mask, const ModelConfig& cfg) {
  Cirm mask = Decompress(compressed_mask, cfg.cirm);
  Waveform out = Istft(ApplyMask(noisy, mask), cfg.stft(), cfg.sample_rate);
  ClipToPcmRange(&out);
  return out;
}

Waveform Enhance(const Waveform& noisy, const ModelParams& p, int threads) {
  const ModelConfig& cfg = p.config;
  if (noisy.sample_rate != cfg.sample_rate) {
    throw FormatError("Enhance: input is " + std::to_string(noisy.sample_rate) +
                      " Hz, model expects " + std::to_string(cfg.sample_rate) + " Hz");
  }
  for (double s : noisy.samples)
    if (!std::isfinite(s)) throw FormatError("Enhance: non-finite input sample");
  ComplexSpectrogram spec = Stft(noisy, cfg.stft());
  Matrix magnitude = Magnitude(spec);
  Cirm mask = PredictMask(p, magnitude, threads);
  return ReconstructFromMask(spec, mask, cfg);
}

}  // namespace fsca
