// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_FSCA_H_
#define FSCA_FSCA_H_

#include <vector>

#include "fsca/config.h"
#include "fsca/fullband.h"
#include "fsca/init.h"
#include "fsca/subband.h"

namespace fsca {

// Fusion embedding Ψ_f, [2n + 1, T].
using FusionEmbedding = Matrix;

// Fullband-subband cross-attention. Queries come from the fullband embedding
// (one F-vector per frame), keys and values from one subband unit (one
// (2n+1)-vector per frame); attention runs over frames. One parameter set is
// shared by all F frequencies.
//
//   Q = Ψ^gᵀ W_q + b_q           [T, d]
//   K = Ψ^sᵀ W_k + b_k           [T, d]
//   V = Ψ^sᵀ W_v + b_v           [T, d]
//   z = MHA(Q, K, V) W_o + b_o + Ψ^sᵀ        [T, 2n+1]
//   Ψ_fᵀ = z + ReLU(z W_1 + b_1) W_2 + b_2
struct FscaParams {
  Parameter q_weight;     // [F, d]
  Parameter q_bias;       // [d]
  Parameter k_weight;     // [2n+1, d]
  Parameter k_bias;       // [d]
  Parameter v_weight;     // [2n+1, d]
  Parameter v_bias;       // [d]
  Parameter out_weight;   // [d, 2n+1]
  Parameter out_bias;     // [2n+1]
  Parameter ffn1_weight;  // [2n+1, r(2n+1)]
  Parameter ffn1_bias;    // [r(2n+1)]
  Parameter ffn2_weight;  // [r(2n+1), 2n+1]
  Parameter ffn2_bias;    // [2n+1]
  int heads = 1;
  ops::AttentionMask mask = ops::AttentionMask::kFull;

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
    fn(s.q_weight);
    fn(s.q_bias);
    fn(s.k_weight);
    fn(s.k_bias);
    fn(s.v_weight);
    fn(s.v_bias);
    fn(s.out_weight);
    fn(s.out_bias);
    fn(s.ffn1_weight);
    fn(s.ffn1_bias);
    fn(s.ffn2_weight);
    fn(s.ffn2_bias);
  }
};

FscaParams MakeFsca(const ModelConfig& cfg, Initializer* init);

// Query projection of the (shared) fullband embedding. fullband_tm is Ψ^gᵀ,
// [T, F]. Computed once and reused by every frequency.
Var FscaQuery(Tape& t, Var fullband_tm, const FscaParams& p);

// One frequency: unit_tm is Ψ^s_fᵀ [T, 2n+1], query from FscaQuery.
// Returns Ψ_fᵀ [T, 2n+1].
Var FscaFuse(Tape& t, Var unit_tm, Var query, const FscaParams& p,
             std::vector<Matrix>* attention_weights = nullptr);

// Value-level forms. `fullband` is Ψ^g [F, T]. Results are [2n+1, T].
FusionEmbedding FscaForward(const SubbandUnit& unit, const FullbandEmbedding& fullband,
                            const FscaParams& p);
// Result f equals FscaForward(units[f], ...) bit for bit for any `threads`.
std::vector<FusionEmbedding> FscaForwardAll(const std::vector<SubbandUnit>& units,
                                            const FullbandBroadcast& fullband,
                                            const FscaParams& p, int threads = 1);

}  // namespace fsca

#endif  // FSCA_FSCA_H_
