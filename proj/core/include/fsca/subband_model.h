// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_SUBBAND_MODEL_H_
#define FSCA_SUBBAND_MODEL_H_

#include <vector>

#include "fsca/cirm.h"
#include "fsca/config.h"
#include "fsca/init.h"

namespace fsca {

struct LstmLayerParams {
  Parameter input_weight;      // [d_in, 4H]
  Parameter recurrent_weight;  // [H, 4H]
  Parameter bias;              // [4H], gate blocks (i, f, g, o)
};

// Stacked unidirectional LSTMs + FC (H -> 2) shared by every frequency.
// Output column 0 is the real mask track, column 1 the imaginary one.
struct SubbandModelParams {
  std::vector<LstmLayerParams> layers;
  Parameter fc_weight;  // [H, 2]
  Parameter fc_bias;    // [2]

  Index input_width() const { return layers.front().input_weight.value.rows(); }

  template <typename Fn>
  void Visit(Fn&& fn) {
    VisitImpl(*this, fn);
  }
  template <typename Fn>
  void Visit(Fn&& fn) const {
    VisitImpl(*this, fn);
  }

 private:
  template <typename Self, typename Fn>
  static void VisitImpl(Self& s, Fn& fn) {
    for (auto& l : s.layers) {
      fn(l.input_weight);
      fn(l.recurrent_weight);
      fn(l.bias);
    }
    fn(s.fc_weight);
    fn(s.fc_bias);
  }
};

// Input width follows the fusion mode: 2n+1, or 2n+2 with concatenation.
SubbandModelParams MakeSubbandModel(const ModelConfig& cfg, Initializer* init);

// emb_tm [T, width] -> [T, 2].
Var SubbandForward(Tape& t, Var emb_tm, const SubbandModelParams& p);

// Value-level form: embedding [width, T] -> [2, T] (rows: real, imag).
Matrix SubbandForward(const Matrix& embedding, const SubbandModelParams& p);

// Stacks per-frequency outputs into a compressed-domain Cirm [F, T].
Cirm SubbandForwardAll(const std::vector<Matrix>& embeddings,
                       const SubbandModelParams& p, int threads = 1);

}  // namespace fsca

#endif  // FSCA_SUBBAND_MODEL_H_
