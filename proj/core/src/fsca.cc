// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/fsca.h"

#include "fsca/parallel.h"

namespace fsca {

FscaParams MakeFsca(const ModelConfig& cfg, Initializer* init) {
  const int width = cfg.unit_width();
  const int d = cfg.attention.d_model;
  const int inner = cfg.attention.ffn_ratio * width;
  FscaParams p;
  p.heads = cfg.attention.heads;
  p.mask = cfg.attention.mask;
  p.q_weight = Parameter("fsca.query.weight", cfg.bins(), d);
  p.q_bias = Parameter::Vector("fsca.query.bias", d);
  p.k_weight = Parameter("fsca.key.weight", width, d);
  p.k_bias = Parameter::Vector("fsca.key.bias", d);
  p.v_weight = Parameter("fsca.value.weight", width, d);
  p.v_bias = Parameter::Vector("fsca.value.bias", d);
  p.out_weight = Parameter("fsca.attn_out.weight", d, width);
  p.out_bias = Parameter::Vector("fsca.attn_out.bias", width);
  p.ffn1_weight = Parameter("fsca.ffn1.weight", width, inner);
  p.ffn1_bias = Parameter::Vector("fsca.ffn1.bias", inner);
  p.ffn2_weight = Parameter("fsca.ffn2.weight", inner, width);
  p.ffn2_bias = Parameter::Vector("fsca.ffn2.bias", width);
  if (init != nullptr) {
    init->Uniform(&p.q_weight, cfg.bins());
    init->Uniform(&p.k_weight, width);
    init->Uniform(&p.v_weight, width);
    init->Uniform(&p.out_weight, d);
    init->Uniform(&p.ffn1_weight, width);
    init->Uniform(&p.ffn2_weight, inner);
  }
  return p;
}

Var FscaQuery(Tape& t, Var fullband_tm, const FscaParams& p) {
  return ops::Linear(t, fullband_tm, t.Bind(p.q_weight), t.Bind(p.q_bias));
}

Var FscaFuse(Tape& t, Var unit_tm, Var query, const FscaParams& p,
             std::vector<Matrix>* attention_weights) {
  const Matrix& unit = t.Value(unit_tm);
  if (unit.cols() != p.k_weight.value.rows()) {
    throw ShapeError("FscaFuse: unit width " + std::to_string(unit.cols()) +
                     " does not match key projection " +
                     ShapeString(p.k_weight.value));
  }
  if (unit.rows() != t.Value(query).rows()) {
    throw ShapeError("FscaFuse: unit has " + std::to_string(unit.rows()) +
                     " frames, query has " + std::to_string(t.Value(query).rows()));
  }
  Var k = ops::Linear(t, unit_tm, t.Bind(p.k_weight), t.Bind(p.k_bias));
  Var v = ops::Linear(t, unit_tm, t.Bind(p.v_weight), t.Bind(p.v_bias));
  Var attended = ops::MultiHeadAttention(t, query, k, v, p.heads, t.Bind(p.out_weight),
                                         t.Bind(p.out_bias), p.mask, attention_weights);
  Var z = ops::Add(t, attended, unit_tm);
  Var hidden = ops::Relu(
      t, ops::Linear(t, z, t.Bind(p.ffn1_weight), t.Bind(p.ffn1_bias)));
  Var out = ops::Add(
      t, z, ops::Linear(t, hidden, t.Bind(p.ffn2_weight), t.Bind(p.ffn2_bias)));
  ExpectShape(t.Value(out), unit.rows(), unit.cols(), "fusion embedding");
  return out;
}

FusionEmbedding FscaForward(const SubbandUnit& unit, const FullbandEmbedding& fullband,
                            const FscaParams& p) {
  ExpectShape(fullband, p.q_weight.value.rows(), unit.values.cols(),
              "FscaForward fullband embedding");
  Tape t(false);
  Var query = FscaQuery(t, t.Constant(fullband.transpose()), p);
  Var out = FscaFuse(t, t.Constant(unit.values.transpose()), query, p);
  return t.Value(out).transpose();
}

std::vector<FusionEmbedding> FscaForwardAll(const std::vector<SubbandUnit>& units,
                                            const FullbandBroadcast& fullband,
                                            const FscaParams& p, int threads) {
  if (static_cast<Index>(units.size()) != fullband.size())
    throw ShapeError("FscaForwardAll: unit count differs from broadcast count");
  std::vector<FusionEmbedding> out(units.size());
  if (units.empty()) return out;
  const Matrix& g = *fullband.get();
  ExpectShape(g, p.q_weight.value.rows(), units[0].values.cols(),
              "FscaForwardAll fullband embedding");
  // The query depends only on Ψ^g, so it is shared by all frequencies.
  Tape shared(false);
  Var query = FscaQuery(shared, shared.Constant(g.transpose()), p);
  const Matrix& q = shared.Value(query);
  ParallelFor(static_cast<Index>(units.size()), threads, [&](Index f) {
    Tape t(false);
    Var out_f = FscaFuse(t, t.Constant(units[f].values.transpose()), t.Ref(q, false), p);
    out[f] = t.Value(out_f).transpose();
  });
  return out;
}

}  // namespace fsca
