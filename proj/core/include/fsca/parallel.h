// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_PARALLEL_H_
#define FSCA_PARALLEL_H_

#include <functional>

#include "fsca/tensor.h"

namespace fsca {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index must
// write only to its own output slot; results are then identical for every
// thread count. The first exception thrown by any worker is rethrown.
void ParallelFor(Index n, int threads, const std::function<void(Index)>& fn);

}  // namespace fsca

#endif  // FSCA_PARALLEL_H_
