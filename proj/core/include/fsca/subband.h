// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_SUBBAND_H_
#define FSCA_SUBBAND_H_

#include <memory>
#include <vector>

#include "fsca/tensor.h"

namespace fsca {

// One frequency bin and its 2n circular neighbours over time.
struct SubbandUnit {
  Index center = 0;
  Matrix values;  // [2n + 1, T]; row n is X_center
};

// Unit f holds rows X_{(f - n + j) mod F} for j = 0..2n. Requires 2n+1 <= F.
std::vector<SubbandUnit> Unfold(const Matrix& x, int neighbors);

// Same reindexing for one unit, time-major: [T, 2n + 1].
Matrix UnfoldTimeMajor(const Matrix& x, int neighbors, Index center);

// [unit; fullband_row] -> [2n + 2, T]. `fullband_row` is [1, T].
Matrix ConcatFullband(const SubbandUnit& unit, const Matrix& fullband_row);

// F read-only views of one fullband embedding, without copies.
class FullbandBroadcast {
 public:
  FullbandBroadcast(std::shared_ptr<const Matrix> embedding, Index count);

  Index size() const { return count_; }
  const Matrix& operator[](Index f) const;
  const Matrix* get() const { return embedding_.get(); }

 private:
  std::shared_ptr<const Matrix> embedding_;
  Index count_;
};

FullbandBroadcast BroadcastFullband(std::shared_ptr<const Matrix> embedding,
                                    Index count);

}  // namespace fsca

#endif  // FSCA_SUBBAND_H_
