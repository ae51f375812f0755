// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/tensor.h"

#include <sstream>

namespace fsca {

Parameter::Parameter(std::string name, Index rows, Index cols)
    : name(std::move(name)),
      value(Matrix::Zero(rows, cols)),
      grad(Matrix::Zero(rows, cols)) {}

Parameter Parameter::Vector(std::string name, Index size) {
  Parameter p(std::move(name), 1, size);
  p.is_vector = true;
  return p;
}

std::vector<int64_t> Parameter::Shape() const {
  if (is_vector) return {static_cast<int64_t>(value.cols())};
  return {static_cast<int64_t>(value.rows()),
          static_cast<int64_t>(value.cols())};
}

void Parameter::ZeroGrad() { grad.setZero(value.rows(), value.cols()); }

std::string ShapeString(const Matrix& m) {
  return ShapeString(std::vector<int64_t>{static_cast<int64_t>(m.rows()),
                                          static_cast<int64_t>(m.cols())});
}

std::string ShapeString(const std::vector<int64_t>& shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ']';
  return os.str();
}

}  // namespace fsca
