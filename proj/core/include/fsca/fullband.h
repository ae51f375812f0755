// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_FULLBAND_H_
#define FSCA_FULLBAND_H_

#include <string>
#include <vector>

#include "fsca/config.h"
#include "fsca/init.h"
#include "fsca/ops.h"

namespace fsca {

// Fullband embedding Ψ^g, [F, T], same size as the magnitude input.
using FullbandEmbedding = Matrix;

// Residual TCN block:
//   y = x + out_conv(gLN(PReLU(ddconv(gLN(PReLU(in_conv(x)))))))
struct TcnBlockParams {
  Parameter in_weight;    // [C, H]
  Parameter in_bias;      // [H]
  Parameter prelu1;       // [H]
  Parameter norm1_gamma;  // [H]
  Parameter norm1_beta;   // [H]
  Parameter depthwise;    // [H, k]
  Parameter prelu2;       // [H]
  Parameter norm2_gamma;  // [H]
  Parameter norm2_beta;   // [H]
  Parameter out_weight;   // [H, C]
  Parameter out_bias;     // [C]
  int dilation = 1;

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
    fn(s.in_weight);
    fn(s.in_bias);
    fn(s.prelu1);
    fn(s.norm1_gamma);
    fn(s.norm1_beta);
    fn(s.depthwise);
    fn(s.prelu2);
    fn(s.norm2_gamma);
    fn(s.norm2_beta);
    fn(s.out_weight);
    fn(s.out_bias);
  }
};

TcnBlockParams MakeTcnBlock(const std::string& prefix, int channels, int hidden,
                            int kernel, int dilation, Initializer* init);

// Normalization statistics applied inside one block, in order.
struct TcnBlockTrace {
  ops::NormStats norm1;
  ops::NormStats norm2;
};

// x [C, T]. `frozen`, when given, replaces both normalization statistics;
// `trace` records the statistics that were used.
Var TcnBlockForward(Tape& t, Var x, const TcnBlockParams& p,
                    const TcnBlockTrace* frozen = nullptr,
                    TcnBlockTrace* trace = nullptr);

// M groups of N TCN blocks followed by a framewise FC (C -> F) and ReLU.
struct FullbandParams {
  std::vector<TcnBlockParams> blocks;  // group-major
  Parameter fc_weight;                 // [C, F]
  Parameter fc_bias;                   // [F]

  template <typename Fn>
  void Visit(Fn&& fn) {
    for (auto& b : blocks) b.Visit(fn);
    fn(fc_weight);
    fn(fc_bias);
  }
  template <typename Fn>
  void Visit(Fn&& fn) const {
    for (const auto& b : blocks) b.Visit(fn);
    fn(fc_weight);
    fn(fc_bias);
  }
};

FullbandParams MakeFullband(const ModelConfig& cfg, Initializer* init);

// Number of past frames (including the current one) any output frame can
// see through the convolution path: 1 + sum over blocks of (k - 1) d.
int ReceptiveField(const TcnConfig& cfg);

// x [F, T] magnitude -> Ψ^g [F, T], entries >= 0.
Var FullbandForward(Tape& t, Var x, const FullbandParams& p,
                    const std::vector<TcnBlockTrace>* frozen = nullptr,
                    std::vector<TcnBlockTrace>* trace = nullptr);

FullbandEmbedding FullbandForward(const Matrix& x, const FullbandParams& p,
                                  const std::vector<TcnBlockTrace>* frozen = nullptr,
                                  std::vector<TcnBlockTrace>* trace = nullptr);

}  // namespace fsca

#endif  // FSCA_FULLBAND_H_
