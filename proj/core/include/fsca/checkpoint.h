// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FSCA_CHECKPOINT_H_
#define FSCA_CHECKPOINT_H_

#include <cstdint>
#include <string>

#include "fsca/model.h"

namespace fsca {

// Layout:
//   "FSCA" | u32 LE version | u64 LE metadata length | UTF-8 JSON metadata
//   | float32 LE payloads, row-major, in metadata order.
// Metadata: {"config": <model config>, "tensors": [{"name", "shape",
// "offset"}]}, where offset is the byte offset within the payload section.
inline constexpr uint32_t kCheckpointVersion = 1;

void SaveCheckpoint(const ModelParams& p, const std::string& path);

// Rebuilds the model from the embedded config. Throws IoError when the file
// cannot be read and FormatError for bad magic/version, truncation or a
// tensor table that disagrees with the embedded config.
ModelParams LoadCheckpoint(const std::string& path);

// As above, but the tensors must also match the model `expected` describes;
// the error names the first mismatched tensor.
ModelParams LoadCheckpoint(const std::string& path, const ModelConfig& expected);

}  // namespace fsca

#endif  // FSCA_CHECKPOINT_H_
