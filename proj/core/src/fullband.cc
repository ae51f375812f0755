// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/fullband.h"

namespace fsca {

TcnBlockParams MakeTcnBlock(const std::string& prefix, int channels, int hidden,
                            int kernel, int dilation, Initializer* init) {
  TcnBlockParams p;
  p.dilation = dilation;
  p.in_weight = Parameter(prefix + ".in_conv.weight", channels, hidden);
  p.in_bias = Parameter::Vector(prefix + ".in_conv.bias", hidden);
  p.prelu1 = Parameter::Vector(prefix + ".prelu1.alpha", hidden);
  p.norm1_gamma = Parameter::Vector(prefix + ".norm1.gamma", hidden);
  p.norm1_beta = Parameter::Vector(prefix + ".norm1.beta", hidden);
  p.depthwise = Parameter(prefix + ".dconv.kernel", hidden, kernel);
  p.prelu2 = Parameter::Vector(prefix + ".prelu2.alpha", hidden);
  p.norm2_gamma = Parameter::Vector(prefix + ".norm2.gamma", hidden);
  p.norm2_beta = Parameter::Vector(prefix + ".norm2.beta", hidden);
  p.out_weight = Parameter(prefix + ".out_conv.weight", hidden, channels);
  p.out_bias = Parameter::Vector(prefix + ".out_conv.bias", channels);
  if (init != nullptr) {
    init->Uniform(&p.in_weight, channels);
    init->Fill(&p.prelu1, 0.25);
    init->Fill(&p.norm1_gamma, 1.0);
    init->Uniform(&p.depthwise, kernel);
    init->Fill(&p.prelu2, 0.25);
    init->Fill(&p.norm2_gamma, 1.0);
    init->Uniform(&p.out_weight, hidden);
  }
  return p;
}

Var TcnBlockForward(Tape& t, Var x, const TcnBlockParams& p,
                    const TcnBlockTrace* frozen, TcnBlockTrace* trace) {
  const Matrix& in = t.Value(x);
  if (in.rows() != p.in_weight.value.rows()) {
    throw ShapeError("TcnBlock " + p.in_weight.name + ": input has " +
                     std::to_string(in.rows()) + " channels, block expects " +
                     std::to_string(p.in_weight.value.rows()));
  }
  TcnBlockTrace used;
  Var h = ops::PointwiseConv(t, x, t.Bind(p.in_weight), t.Bind(p.in_bias));
  h = ops::PRelu(t, h, t.Bind(p.prelu1));
  h = ops::GlobalLayerNorm(t, h, t.Bind(p.norm1_gamma), t.Bind(p.norm1_beta),
                           frozen ? &frozen->norm1 : nullptr, &used.norm1);
  h = ops::DepthwiseConv(t, h, t.Bind(p.depthwise), p.dilation);
  h = ops::PRelu(t, h, t.Bind(p.prelu2));
  h = ops::GlobalLayerNorm(t, h, t.Bind(p.norm2_gamma), t.Bind(p.norm2_beta),
                           frozen ? &frozen->norm2 : nullptr, &used.norm2);
  h = ops::PointwiseConv(t, h, t.Bind(p.out_weight), t.Bind(p.out_bias));
  if (trace != nullptr) *trace = used;
  return ops::Add(t, x, h);
}

FullbandParams MakeFullband(const ModelConfig& cfg, Initializer* init) {
  FullbandParams p;
  const int channels = cfg.bins();
  for (int g = 0; g < cfg.tcn.groups; ++g) {
    for (int b = 0; b < cfg.tcn.blocks_per_group; ++b) {
      p.blocks.push_back(MakeTcnBlock(
          "fullband.group" + std::to_string(g) + ".block" + std::to_string(b),
          channels, cfg.tcn.hidden, cfg.tcn.kernel, cfg.tcn.dilations[b], init));
    }
  }
  p.fc_weight = Parameter("fullband.fc.weight", channels, cfg.bins());
  p.fc_bias = Parameter::Vector("fullband.fc.bias", cfg.bins());
  if (init != nullptr) init->Uniform(&p.fc_weight, channels);
  return p;
}

int ReceptiveField(const TcnConfig& cfg) {
  int span = 0;
  for (int d : cfg.dilations) span += (cfg.kernel - 1) * d;
  return 1 + span * cfg.groups;
}

Var FullbandForward(Tape& t, Var x, const FullbandParams& p,
                    const std::vector<TcnBlockTrace>* frozen,
                    std::vector<TcnBlockTrace>* trace) {
  if (frozen != nullptr && frozen->size() != p.blocks.size())
    throw ShapeError("FullbandForward: frozen trace has wrong block count");
  if (trace != nullptr) trace->assign(p.blocks.size(), {});
  const Index frames = t.Value(x).cols();
  Var h = x;
  for (size_t i = 0; i < p.blocks.size(); ++i) {
    h = TcnBlockForward(t, h, p.blocks[i], frozen ? &(*frozen)[i] : nullptr,
                        trace ? &(*trace)[i] : nullptr);
  }
  h = ops::PointwiseConv(t, h, t.Bind(p.fc_weight), t.Bind(p.fc_bias));
  h = ops::Relu(t, h);
  ExpectShape(t.Value(h), p.fc_weight.value.cols(), frames, "fullband embedding");
  return h;
}

FullbandEmbedding FullbandForward(const Matrix& x, const FullbandParams& p,
                                  const std::vector<TcnBlockTrace>* frozen,
                                  std::vector<TcnBlockTrace>* trace) {
  Tape t(false);
  return t.Value(FullbandForward(t, t.Ref(x, false), p, frozen, trace));
}

}  // namespace fsca
