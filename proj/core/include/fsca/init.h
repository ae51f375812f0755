// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_INIT_H_
#define FSCA_INIT_H_

#include <cstdint>
#include <random>

#include "fsca/tensor.h"

namespace fsca {

// Fills parameters as they are constructed. Draw order is construction order,
// so a given seed always yields the same model. Every value is rounded to
// float so that checkpoints (float32 payloads) round-trip exactly.
class Initializer {
 public:
  explicit Initializer(uint64_t seed) : rng_(seed) {}

  // uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))
  void Uniform(Parameter* p, Index fan_in);
  void Fill(Parameter* p, double value);

 private:
  std::mt19937_64 rng_;
};

inline double RoundToFloat(double v) {
  return static_cast<double>(static_cast<float>(v));
}

}  // namespace fsca

#endif  // FSCA_INIT_H_
