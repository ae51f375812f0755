// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/init.h"

#include <cmath>

namespace fsca {

void Initializer::Uniform(Parameter* p, Index fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Index i = 0; i < p->value.size(); ++i)
    p->value.data()[i] = RoundToFloat(dist(rng_));
}

void Initializer::Fill(Parameter* p, double value) {
  p->value.setConstant(RoundToFloat(value));
}

}  // namespace fsca
