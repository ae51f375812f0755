// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/fullband.h"

#include <gtest/gtest.h>

#include "fsca/metrics.h"
#include "test_util.h"

namespace fsca {
namespace {

using testing::BitEqual;
using testing::MaxAbs;
using testing::RandomMatrix;

Matrix Block(const Matrix& x, const TcnBlockParams& p, const TcnBlockTrace* frozen = nullptr,
             TcnBlockTrace* trace = nullptr) {
  Tape t(false);
  return t.Value(TcnBlockForward(t, t.Ref(x, false), p, frozen, trace));
}

// First and last frame at which two column sequences differ, or {-1, -1}.
std::pair<Index, Index> DiffSupport(const Matrix& a, const Matrix& b) {
  Index first = -1, last = -1;
  for (Index t = 0; t < a.cols(); ++t) {
    if (!BitEqual(a.col(t), b.col(t))) {
      if (first < 0) first = t;
      last = t;
    }
  }
  return {first, last};
}

TEST(TcnBlockTest, ZeroWeightsArePureResidual) {
  TcnBlockParams p = MakeTcnBlock("b", 4, 6, 3, 2, nullptr);
  Matrix x = RandomMatrix(4, 10, 1);
  EXPECT_TRUE(BitEqual(Block(x, p), x));
}

TEST(TcnBlockTest, PerturbationSupport) {
  Initializer init(3);
  for (int d : {1, 2, 5, 9}) {
    TcnBlockParams p = MakeTcnBlock("b", 4, 6, 3, d, &init);
    Matrix x = RandomMatrix(4, 40, 2);
    TcnBlockTrace trace;
    Matrix y = Block(x, p, nullptr, &trace);
    Matrix xp = x;
    xp.col(10) += RandomMatrix(4, 1, 3);
    auto [first, last] = DiffSupport(Block(xp, p, &trace), y);
    EXPECT_EQ(first, 10);
    EXPECT_EQ(last, 10 + 2 * d);
  }
}

TEST(TcnBlockTest, ParameterCount) {
  TcnBlockParams p = MakeTcnBlock("b", 257, 512, 3, 1, nullptr);
  int64_t total = 0;
  p.Visit([&](const Parameter& q) { total += q.Size(); });
  EXPECT_EQ(total, 268545);
}

TEST(FullbandTest, DefaultStructure) {
  ModelConfig cfg;
  FullbandParams p = MakeFullband(cfg, nullptr);
  ASSERT_EQ(p.blocks.size(), 8u);
  const int expect[] = {1, 2, 5, 9, 1, 2, 5, 9};
  for (int i = 0; i < 8; ++i) EXPECT_EQ(p.blocks[i].dilation, expect[i]);
  int64_t total = 0;
  p.Visit([&](const Parameter& q) { total += q.Size(); });
  EXPECT_EQ(total, 2214666);
  EXPECT_EQ(ReceptiveField(cfg.tcn), 69);
  EXPECT_EQ(p.blocks[5].in_weight.name, "fullband.group1.block1.in_conv.weight");
}

TEST(FullbandTest, ShapeAndNonNegativity) {
  for (auto [nfft, frames] : {std::pair{16, 3}, std::pair{32, 11}, std::pair{64, 7}}) {
    ModelConfig cfg = testing::TinyConfig();
    cfg.n_fft = nfft;
    cfg.hop = nfft / 2;
    cfg.n = 1;
    FullbandParams p = MakeFullband(cfg, nullptr);
    Initializer init(nfft);
    p = MakeFullband(cfg, &init);
    Matrix x = RandomMatrix(cfg.bins(), frames, nfft, 0.0, 3.0);
    Matrix g = FullbandForward(x, p);
    EXPECT_EQ(g.rows(), x.rows());
    EXPECT_EQ(g.cols(), x.cols());
    EXPECT_GE(g.minCoeff(), 0.0);
  }
}

TEST(FullbandTest, DefaultReceptiveFieldIs69Frames) {
  ModelConfig cfg;
  FullbandParams p = MakeFullband(cfg, nullptr);
  Initializer init(11);
  p = MakeFullband(cfg, &init);
  const Index frames = 100, probe = 20;
  Matrix x = RandomMatrix(cfg.bins(), frames, 5, 0.0, 1.0);
  std::vector<TcnBlockTrace> trace;
  Matrix g = FullbandForward(x, p, nullptr, &trace);
  Matrix xp = x;
  xp.col(probe).array() += 0.5;
  auto [first, last] = DiffSupport(FullbandForward(xp, p, &trace), g);
  EXPECT_EQ(first, probe);
  EXPECT_EQ(last, probe + 68);
}

TEST(FullbandTest, WrongInputHeightThrows) {
  ModelConfig cfg = testing::TinyConfig();
  FullbandParams p = MakeFullband(cfg, nullptr);
  EXPECT_THROW(FullbandForward(RandomMatrix(10, 4, 1), p), ShapeError);
}

}  // namespace
}  // namespace fsca
