// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/subband.h"

#include <string>

namespace fsca {
namespace {

void CheckNeighbors(const Matrix& x, int neighbors) {
  if (neighbors < 0) throw ShapeError("Unfold: neighbour count must be >= 0");
  if (2 * static_cast<Index>(neighbors) + 1 > x.rows()) {
    throw ShapeError("Unfold: 2n+1 = " + std::to_string(2 * neighbors + 1) +
                     " exceeds " + std::to_string(x.rows()) + " bins");
  }
}

Index Wrap(Index i, Index n) { return ((i % n) + n) % n; }

}  // namespace

std::vector<SubbandUnit> Unfold(const Matrix& x, int neighbors) {
  CheckNeighbors(x, neighbors);
  const Index bins = x.rows(), width = 2 * neighbors + 1;
  std::vector<SubbandUnit> units(bins);
  for (Index f = 0; f < bins; ++f) {
    units[f].center = f;
    units[f].values.resize(width, x.cols());
    for (Index j = 0; j < width; ++j)
      units[f].values.row(j) = x.row(Wrap(f - neighbors + j, bins));
  }
  return units;
}

Matrix UnfoldTimeMajor(const Matrix& x, int neighbors, Index center) {
  CheckNeighbors(x, neighbors);
  const Index bins = x.rows(), width = 2 * neighbors + 1;
  Matrix out(x.cols(), width);
  for (Index j = 0; j < width; ++j)
    out.col(j) = x.row(Wrap(center - neighbors + j, bins)).transpose();
  return out;
}

Matrix ConcatFullband(const SubbandUnit& unit, const Matrix& fullband_row) {
  ExpectShape(fullband_row, 1, unit.values.cols(), "ConcatFullband row");
  Matrix out(unit.values.rows() + 1, unit.values.cols());
  out.topRows(unit.values.rows()) = unit.values;
  out.bottomRows(1) = fullband_row;
  return out;
}

FullbandBroadcast::FullbandBroadcast(std::shared_ptr<const Matrix> embedding,
                                     Index count)
    : embedding_(std::move(embedding)), count_(count) {
  if (!embedding_) throw ShapeError("FullbandBroadcast: null embedding");
}

const Matrix& FullbandBroadcast::operator[](Index f) const {
  if (f < 0 || f >= count_) throw ShapeError("FullbandBroadcast: index out of range");
  return *embedding_;
}

FullbandBroadcast BroadcastFullband(std::shared_ptr<const Matrix> embedding,
                                    Index count) {
  return FullbandBroadcast(std::move(embedding), count);
}

}  // namespace fsca
