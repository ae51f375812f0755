// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/subband.h"

#include <algorithm>
#include <map>
#include <memory>

#include <gtest/gtest.h>

#include "test_util.h"

namespace fsca {
namespace {

using testing::BitEqual;
using testing::RandomMatrix;

TEST(UnfoldTest, WrapExample) {
  Matrix x(5, 2);
  for (Index f = 0; f < 5; ++f) x.row(f).setConstant(static_cast<double>(f));
  std::vector<SubbandUnit> units = Unfold(x, 1);
  ASSERT_EQ(units.size(), 5u);
  EXPECT_EQ(units[0].values(0, 0), 4.0);
  EXPECT_EQ(units[0].values(1, 0), 0.0);
  EXPECT_EQ(units[0].values(2, 0), 1.0);
}

TEST(UnfoldTest, ModuloOracleExhaustive) {
  for (Index F = 1; F <= 8; ++F)
    for (int n = 0; n <= 3; ++n) {
      Matrix x = RandomMatrix(F, 3, 17 * F + n);
      if (2 * n + 1 > F) {
        EXPECT_THROW(Unfold(x, n), ShapeError);
        continue;
      }
      std::vector<SubbandUnit> units = Unfold(x, n);
      ASSERT_EQ(static_cast<Index>(units.size()), F);
      for (Index f = 0; f < F; ++f) {
        EXPECT_EQ(units[f].center, f);
        ASSERT_EQ(units[f].values.rows(), 2 * n + 1);
        for (int j = -n; j <= n; ++j) {
          const Index src = ((f + j) % F + F) % F;
          EXPECT_TRUE(BitEqual(units[f].values.row(j + n), x.row(src)));
        }
        EXPECT_TRUE(BitEqual(UnfoldTimeMajor(x, n, f), units[f].values.transpose()));
      }
    }
}

TEST(UnfoldTest, ZeroNeighborsAndDefaultWidth) {
  Matrix x = RandomMatrix(257, 4, 1);
  std::vector<SubbandUnit> units = Unfold(x, 0);
  for (Index f = 0; f < 257; ++f) EXPECT_TRUE(BitEqual(units[f].values, x.row(f)));
  EXPECT_EQ(Unfold(x, 15)[100].values.rows(), 31);
}

TEST(UnfoldTest, RowMultiplicityAndShiftEquivariance) {
  const Index F = 7;
  const int n = 2;
  Matrix x = RandomMatrix(F, 3, 2);
  std::vector<SubbandUnit> units = Unfold(x, n);
  std::map<double, int> seen;
  for (const auto& u : units)
    for (Index r = 0; r < u.values.rows(); ++r) ++seen[u.values(r, 0)];
  for (Index f = 0; f < F; ++f) EXPECT_EQ(seen[x(f, 0)], 2 * n + 1);

  Matrix shifted(F, 3);
  for (Index f = 0; f < F; ++f) shifted.row((f + 1) % F) = x.row(f);
  std::vector<SubbandUnit> su = Unfold(shifted, n);
  for (Index f = 0; f < F; ++f) EXPECT_TRUE(BitEqual(su[(f + 1) % F].values, units[f].values));
}

TEST(ConcatFullbandTest, AppendsRow) {
  Matrix x = RandomMatrix(9, 5, 3);
  SubbandUnit u = Unfold(x, 3)[4];
  Matrix g = RandomMatrix(1, 5, 4);
  Matrix c = ConcatFullband(u, g);
  ASSERT_EQ(c.rows(), 8);
  EXPECT_TRUE(BitEqual(c.topRows(7), u.values));
  EXPECT_TRUE(BitEqual(c.row(7), g));
  EXPECT_THROW(ConcatFullband(u, RandomMatrix(1, 4, 5)), ShapeError);
}

TEST(BroadcastTest, SharedReadOnlyViews) {
  auto g = std::make_shared<const Matrix>(RandomMatrix(6, 4, 5));
  FullbandBroadcast b = BroadcastFullband(g, 6);
  EXPECT_EQ(b.size(), 6);
  for (Index f = 0; f < 6; ++f) EXPECT_EQ(&b[f], g.get());
  static_assert(std::is_same_v<decltype(b[0]), const Matrix&>);
  EXPECT_EQ(g.use_count(), 2);
}

}  // namespace
}  // namespace fsca
