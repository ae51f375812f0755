// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_OPS_H_
#define FSCA_OPS_H_

#include <vector>

#include "fsca/tape.h"

// Differentiable primitives. Each op checks shapes, records its output on the
// tape and registers an analytic backward. Layout conventions:
//   channel-major  [C, T]  rows are channels (convolutions, norms, PReLU)
//   time-major     [T, d]  rows are frames (linear, attention, LSTM)
// All reductions run in ascending index order.
namespace fsca::ops {

// y = x W + b.  x [N, d_in], W [d_in, d_out], b [1, d_out].
Var Linear(Tape& t, Var x, Var weight, Var bias);

// Framewise channel mixing: y[:, t] = Wᵀ x[:, t] + b.
// x [C_in, T], W [C_in, C_out], b [1, C_out] -> [C_out, T].
Var PointwiseConv(Tape& t, Var x, Var weight, Var bias);

// Causal depthwise dilated convolution, no bias.
// y[c,t] = sum_{j=0..k-1} kernel[c,j] * x[c, t - (k-1-j)*dilation].
// x [C, T], kernel [C, k].
Var DepthwiseConv(Tape& t, Var x, Var kernel, int dilation);

// Per-channel PReLU. x [C, T], alpha [1, C].
Var PRelu(Tape& t, Var x, Var alpha);

Var Relu(Tape& t, Var x);

// Mean and variance of one global layer norm call.
struct NormStats {
  double mean = 0.0;
  double var = 0.0;
};

inline constexpr double kGlobalNormEpsilon = 1e-8;

// Global layer norm over all of C and T jointly.
// y = gamma_c * (x - mean) / sqrt(var + eps) + beta_c.
// x [C, T], gamma [1, C], beta [1, C]. When `frozen` is given its statistics
// are used instead of the input's (and treated as constants in backward).
// `stats_out` receives the statistics that were applied.
Var GlobalLayerNorm(Tape& t, Var x, Var gamma, Var beta,
                    const NormStats* frozen = nullptr,
                    NormStats* stats_out = nullptr);

// Row-wise softmax, stabilized by row-max subtraction.
Var SoftmaxRows(Tape& t, Var x);

enum class AttentionMask { kFull, kCausal };

// Multi-head scaled dot-product attention with output projection.
// q [Tq, d], k [Tk, d], v [Tk, d]; d divisible by heads.
// Per head h: A_h = softmax(Q_h K_hᵀ / sqrt(d/heads)), O_h = A_h V_h.
// y = concat_h(O_h) W_o + b_o, W_o [d, d_out], b_o [1, d_out].
// For kCausal, scores with key index > query index are excluded.
// `weights_out`, when given, receives the per-head attention matrices.
Var MultiHeadAttention(Tape& t, Var q, Var k, Var v, int heads, Var out_weight,
                       Var out_bias, AttentionMask mask,
                       std::vector<Matrix>* weights_out = nullptr);

// Unidirectional LSTM layer, gate blocks ordered (input, forget, cell,
// output). x [T, d_in], W_ih [d_in, 4H], W_hh [H, 4H], b [1, 4H].
// h0 / c0 are optional [1, H] initial states (zeros otherwise) and are
// treated as constants. Returns h_t for every frame, [T, H].
Var LstmLayer(Tape& t, Var x, Var input_weight, Var recurrent_weight,
              Var bias, const Matrix* h0 = nullptr, const Matrix* c0 = nullptr);

Var Add(Tape& t, Var a, Var b);
Var Transpose(Tape& t, Var x);
// [T, p] ++ [T, q] -> [T, p + q].
Var ConcatCols(Tape& t, Var a, Var b);

// Mean squared error over every entry, returned as [1, 1].
Var MseLoss(Tape& t, Var pred, Var target);

// <x, weights> as [1, 1]; `weights` is copied.
Var Dot(Tape& t, Var x, const Matrix& weights);

}  // namespace fsca::ops

#endif  // FSCA_OPS_H_
