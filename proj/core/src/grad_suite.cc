// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/grad_suite.h"

#include <algorithm>
#include <functional>
#include <random>

#include "fsca/fsca.h"
#include "fsca/fullband.h"
#include "fsca/grad_check.h"
#include "fsca/model.h"
#include "fsca/ops.h"
#include "fsca/subband_model.h"
#include "fsca/training.h"

namespace fsca {
namespace {

// Element-level ops are checked tighter than composed modules.
constexpr double kElementTolerance = 1e-6;
constexpr double kModuleTolerance = 1e-4;
constexpr int kEndToEndSamples = 20;

Matrix Random(Index rows, Index cols, std::mt19937_64& rng, double lo = -1.0,
              double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

// Small model used by the module and end-to-end checks.
ModelConfig SuiteConfig() {
  ModelConfig cfg;
  cfg.n_fft = 16;
  cfg.hop = 8;
  cfg.n = 2;
  cfg.tcn.groups = 1;
  cfg.tcn.blocks_per_group = 2;
  cfg.tcn.dilations = {1, 2};
  cfg.tcn.hidden = 6;
  cfg.attention.heads = 2;
  cfg.attention.d_model = 4;
  cfg.attention.ffn_ratio = 2;
  cfg.lstm.hidden = 3;
  return cfg;
}

// Randomizes every parameter so that gLN gammas, PReLU slopes and biases are
// exercised away from their initial constants.
void Perturb(Parameter& p, std::mt19937_64& rng) {
  p.value += Random(p.value.rows(), p.value.cols(), rng, -0.5, 0.5);
}

using Case = std::function<GradCheckReport(uint64_t seed)>;

struct Spec {
  std::string op;
  double tolerance;
  Case run;
};

GradCheckOptions Kinked() {
  GradCheckOptions o;
  o.skip_kinks = true;
  return o;
}

std::vector<Spec> Cases() {
  std::vector<Spec> cases;
  const double et = kElementTolerance, mt = kModuleTolerance;

  cases.push_back({"linear", et, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix x = Random(4, 3, rng), w = Random(3, 5, rng), b = Random(1, 5, rng);
    return GradCheck("linear", {&x, &w, &b}, [&](Tape& t) {
      return ops::Linear(t, t.Ref(x, true), t.Ref(w, true), t.Ref(b, true));
    }, s);
  }});
  cases.push_back({"pointwise_conv", et, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix x = Random(3, 6, rng), w = Random(3, 4, rng), b = Random(1, 4, rng);
    return GradCheck("pointwise_conv", {&x, &w, &b}, [&](Tape& t) {
      return ops::PointwiseConv(t, t.Ref(x, true), t.Ref(w, true), t.Ref(b, true));
    }, s);
  }});
  cases.push_back({"depthwise_conv", et, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix x = Random(3, 9, rng), k = Random(3, 3, rng);
    const int dilation = 1 + static_cast<int>(s % 3);
    return GradCheck("depthwise_conv", {&x, &k}, [&](Tape& t) {
      return ops::DepthwiseConv(t, t.Ref(x, true), t.Ref(k, true), dilation);
    }, s);
  }});
  cases.push_back({"prelu", et, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix x = Random(3, 5, rng), a = Random(1, 3, rng, 0.0, 0.5);
    return GradCheck("prelu", {&x, &a}, [&](Tape& t) {
      return ops::PRelu(t, t.Ref(x, true), t.Ref(a, true));
    }, s, Kinked());
  }});
  cases.push_back({"relu", et, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix x = Random(4, 5, rng);
    return GradCheck("relu", {&x}, [&](Tape& t) {
      return ops::Relu(t, t.Ref(x, true));
    }, s, Kinked());
  }});
  cases.push_back({"softmax", et, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix x = Random(3, 6, rng, -3.0, 3.0);
    return GradCheck("softmax", {&x}, [&](Tape& t) {
      return ops::SoftmaxRows(t, t.Ref(x, true));
    }, s);
  }});
  cases.push_back({"add_transpose_concat", et, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix a = Random(3, 4, rng), b = Random(3, 4, rng), c = Random(4, 2, rng);
    return GradCheck("add_transpose_concat", {&a, &b, &c}, [&](Tape& t) {
      Var sum = ops::Add(t, t.Ref(a, true), t.Ref(b, true));
      return ops::ConcatCols(t, ops::Transpose(t, sum), t.Ref(c, true));
    }, s);
  }});
  cases.push_back({"mse_loss", et, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix p = Random(3, 4, rng), q = Random(3, 4, rng);
    return GradCheck("mse_loss", {&p, &q}, [&](Tape& t) {
      return ops::MseLoss(t, t.Ref(p, true), t.Ref(q, true));
    }, s);
  }});
  cases.push_back({"global_layer_norm", mt, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix x = Random(3, 5, rng), g = Random(1, 3, rng), b = Random(1, 3, rng);
    return GradCheck("global_layer_norm", {&x, &g, &b}, [&](Tape& t) {
      return ops::GlobalLayerNorm(t, t.Ref(x, true), t.Ref(g, true), t.Ref(b, true));
    }, s);
  }});
  for (auto mask : {ops::AttentionMask::kFull, ops::AttentionMask::kCausal}) {
    const bool causal = mask == ops::AttentionMask::kCausal;
    const std::string name = causal ? "mha_causal" : "mha_full";
    cases.push_back({name, mt, [mask, causal, name](uint64_t s) {
      std::mt19937_64 rng(s);
      const Index tq = causal ? 5 : 4, tk = 5;
      Matrix q = Random(tq, 6, rng), k = Random(tk, 6, rng), v = Random(tk, 6, rng);
      Matrix w = Random(6, 3, rng), b = Random(1, 3, rng);
      return GradCheck(name, {&q, &k, &v, &w, &b}, [&](Tape& t) {
        return ops::MultiHeadAttention(t, t.Ref(q, true), t.Ref(k, true), t.Ref(v, true), 2,
                                       t.Ref(w, true), t.Ref(b, true), mask);
      }, s);
    }});
  }
  cases.push_back({"lstm", mt, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Matrix x = Random(5, 3, rng), wi = Random(3, 16, rng), wh = Random(4, 16, rng),
           b = Random(1, 16, rng);
    return GradCheck("lstm", {&x, &wi, &wh, &b}, [&](Tape& t) {
      Var h1 = ops::LstmLayer(t, t.Ref(x, true), t.Ref(wi, true), t.Ref(wh, true),
                              t.Ref(b, true));
      return h1;
    }, s);
  }});
  cases.push_back({"tcn_block", mt, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Initializer init(s);
    TcnBlockParams p = MakeTcnBlock("block", 3, 4, 3, 2, &init);
    p.Visit([&](Parameter& x) { Perturb(x, rng); });
    Matrix x = Random(3, 7, rng);
    GradTargets targets{&x};
    p.Visit([&](Parameter& q) { targets.push_back(&q.value); });
    return GradCheck("tcn_block", targets, [&](Tape& t) {
      return TcnBlockForward(t, t.Ref(x, true), p);
    }, s, Kinked());
  }});
  cases.push_back({"fsca_forward", mt, [](uint64_t s) {
    std::mt19937_64 rng(s);
    const ModelConfig cfg = SuiteConfig();
    Initializer init(s);
    FscaParams p = MakeFsca(cfg, &init);
    p.Visit([&](Parameter& x) { Perturb(x, rng); });
    const Index frames = 6;
    Matrix g = Random(frames, cfg.bins(), rng, 0.0, 1.0);
    Matrix u = Random(frames, cfg.unit_width(), rng, 0.0, 1.0);
    GradTargets targets{&g, &u};
    p.Visit([&](Parameter& q) { targets.push_back(&q.value); });
    return GradCheck("fsca_forward", targets, [&](Tape& t) {
      Var query = FscaQuery(t, t.Ref(g, true), p);
      return FscaFuse(t, t.Ref(u, true), query, p);
    }, s, Kinked());
  }});
  cases.push_back({"subband_forward", mt, [](uint64_t s) {
    std::mt19937_64 rng(s);
    const ModelConfig cfg = SuiteConfig();
    Initializer init(s);
    SubbandModelParams p = MakeSubbandModel(cfg, &init);
    p.Visit([&](Parameter& x) { Perturb(x, rng); });
    Matrix e = Random(6, p.input_width(), rng);
    GradTargets targets{&e};
    p.Visit([&](Parameter& q) { targets.push_back(&q.value); });
    return GradCheck("subband_forward", targets, [&](Tape& t) {
      return SubbandForward(t, t.Ref(e, true), p);
    }, s);
  }});
  cases.push_back({"cirm_mse_loss", et, [](uint64_t s) {
    std::mt19937_64 rng(s);
    Cirm pred{Random(4, 5, rng), Random(4, 5, rng), true};
    Cirm target{Random(4, 5, rng), Random(4, 5, rng), true};
    return GradCheckScalar(
        "cirm_mse_loss", {&pred.real, &pred.imag},
        [&]() { return CirmMseLoss(pred, target); },
        [&]() {
          Cirm g;
          CirmMseLoss(pred, target, &g);
          return std::vector<Matrix>{g.real, g.imag};
        },
        s);
  }});
  for (FusionMode mode : {FusionMode::kAttention, FusionMode::kAttentionConcat,
                          FusionMode::kConcat}) {
    const std::string name = std::string("end_to_end_") + ToString(mode);
    cases.push_back({name, mt, [mode, name](uint64_t s) {
      std::mt19937_64 rng(s);
      ModelConfig cfg = SuiteConfig();
      cfg.fusion_mode = mode;
      ModelParams p = InitParams(cfg, s);
      p.Visit([&](Parameter& x) { Perturb(x, rng); });
      const Index frames = 6;
      Matrix mag = Random(cfg.bins(), frames, rng, 0.0, 2.0);
      Cirm target{Random(cfg.bins(), frames, rng), Random(cfg.bins(), frames, rng), true};
      GradTargets targets;
      p.Visit([&](Parameter& q) { targets.push_back(&q.value); });
      GradCheckOptions o = Kinked();
      o.sample_entries = kEndToEndSamples;
      return GradCheckScalar(
          name, targets, [&]() { return SequenceLoss(p, mag, target); },
          [&]() {
            p.ZeroGrad();
            AccumulateGradients(p, mag, target);
            std::vector<Matrix> grads;
            p.Visit([&](const Parameter& q) { grads.push_back(q.grad); });
            return grads;
          },
          s, o);
    }});
  }
  return cases;
}

}  // namespace

bool GradSuiteResult::passed() const {
  return !entries.empty() &&
         std::all_of(entries.begin(), entries.end(),
                     [](const GradSuiteEntry& e) { return e.passed(); });
}

GradSuiteResult RunGradientSuite(uint64_t seed, int seeds) {
  GradSuiteResult result;
  for (const Spec& c : Cases()) {
    GradSuiteEntry e;
    e.op = c.op;
    e.tolerance = c.tolerance;
    for (int i = 0; i < seeds; ++i) {
      GradCheckReport r = c.run(seed + static_cast<uint64_t>(i));
      e.worst = std::max(e.worst, r.max_rel_error);
      e.checked += r.checked;
      e.skipped += r.skipped;
      ++e.seeds;
    }
    result.entries.push_back(e);
  }
  return result;
}

}  // namespace fsca
