// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_TENSOR_H_
#define FSCA_TENSOR_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fsca {

// Row-major so that a row (one frame, or one channel track) is contiguous.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor shapes disagree with what an operation expects.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (WAV, checkpoint) or incompatible data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A named trainable tensor. One-dimensional tensors (biases, slopes, norm
// gains) are stored as a single row and flagged so that their logical shape
// is reported as [n].
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  bool is_vector = false;

  Parameter() = default;
  Parameter(std::string name, Index rows, Index cols);
  static Parameter Vector(std::string name, Index size);

  std::vector<int64_t> Shape() const;
  Index Size() const { return value.size(); }
  void ZeroGrad();
};

std::string ShapeString(const Matrix& m);
std::string ShapeString(const std::vector<int64_t>& shape);

inline void ExpectShape(const Matrix& m, Index rows, Index cols,
                        const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(std::string(what) + ": expected [" +
                     std::to_string(rows) + ", " + std::to_string(cols) +
                     "], got " + ShapeString(m));
  }
}

}  // namespace fsca

#endif  // FSCA_TENSOR_H_
