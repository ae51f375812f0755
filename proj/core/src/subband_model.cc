// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/subband_model.h"

#include "fsca/ops.h"
#include "fsca/parallel.h"

namespace fsca {

SubbandModelParams MakeSubbandModel(const ModelConfig& cfg, Initializer* init) {
  SubbandModelParams p;
  const int hidden = cfg.lstm.hidden;
  int width = cfg.subband_input_width();
  for (int l = 0; l < cfg.lstm.layers; ++l) {
    const std::string prefix = "subband.lstm" + std::to_string(l);
    LstmLayerParams layer;
    layer.input_weight = Parameter(prefix + ".input_weight", width, 4 * hidden);
    layer.recurrent_weight = Parameter(prefix + ".recurrent_weight", hidden, 4 * hidden);
    layer.bias = Parameter::Vector(prefix + ".bias", 4 * hidden);
    if (init != nullptr) {
      init->Uniform(&layer.input_weight, width);
      init->Uniform(&layer.recurrent_weight, hidden);
      // Forget gate opens at 1.0.
      layer.bias.value.middleCols(hidden, hidden).setOnes();
    }
    p.layers.push_back(std::move(layer));
    width = hidden;
  }
  p.fc_weight = Parameter("subband.fc.weight", hidden, 2);
  p.fc_bias = Parameter::Vector("subband.fc.bias", 2);
  if (init != nullptr) init->Uniform(&p.fc_weight, hidden);
  return p;
}

Var SubbandForward(Tape& t, Var emb_tm, const SubbandModelParams& p) {
  const Matrix& in = t.Value(emb_tm);
  if (in.cols() != p.input_width()) {
    throw ShapeError("SubbandForward: embedding width " + std::to_string(in.cols()) +
                     " does not match LSTM input width " +
                     std::to_string(p.input_width()));
  }
  Var h = emb_tm;
  for (const auto& layer : p.layers) {
    h = ops::LstmLayer(t, h, t.Bind(layer.input_weight),
                       t.Bind(layer.recurrent_weight), t.Bind(layer.bias));
  }
  return ops::Linear(t, h, t.Bind(p.fc_weight), t.Bind(p.fc_bias));
}

Matrix SubbandForward(const Matrix& embedding, const SubbandModelParams& p) {
  Tape t(false);
  return t.Value(SubbandForward(t, t.Constant(embedding.transpose()), p)).transpose();
}

Cirm SubbandForwardAll(const std::vector<Matrix>& embeddings,
                       const SubbandModelParams& p, int threads) {
  Cirm out;
  out.compressed = true;
  const Index bins = static_cast<Index>(embeddings.size());
  if (bins == 0) return out;
  const Index frames = embeddings[0].cols();
  out.real.resize(bins, frames);
  out.imag.resize(bins, frames);
  ParallelFor(bins, threads, [&](Index f) {
    ExpectShape(embeddings[f], p.input_width(), frames, "SubbandForwardAll embedding");
    Matrix m = SubbandForward(embeddings[f], p);
    out.real.row(f) = m.row(0);
    out.imag.row(f) = m.row(1);
  });
  return out;
}

}  // namespace fsca
