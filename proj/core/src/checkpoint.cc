// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include <nlohmann/json.hpp>

namespace fsca {
namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[4] = {'F', 'S', 'C', 'A'};

template <typename T>
void Put(std::string* out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out->append(buf, sizeof(T));
}

template <typename T>
T Get(const std::vector<char>& in, size_t pos) {
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  return v;
}

struct TensorEntry {
  std::string name;
  std::vector<int64_t> shape;
  uint64_t offset = 0;
};

// Fills `p` from the payload table, verifying each tensor's name and shape.
void Fill(ModelParams* p, const std::vector<TensorEntry>& entries,
          const char* payload, uint64_t payload_size, const std::string& path) {
  size_t index = 0;
  p->Visit([&](Parameter& param) {
    if (index >= entries.size())
      throw FormatError(path + ": checkpoint is missing tensor " + param.name);
    const TensorEntry& e = entries[index++];
    if (e.name != param.name || e.shape != param.Shape()) {
      throw FormatError(path + ": tensor mismatch at " + param.name + " " +
                        ShapeString(param.Shape()) + ": checkpoint has " + e.name +
                        " " + ShapeString(e.shape));
    }
    const uint64_t bytes = static_cast<uint64_t>(param.Size()) * sizeof(float);
    if (e.offset + bytes > payload_size)
      throw FormatError(path + ": truncated payload for tensor " + e.name);
    const char* src = payload + e.offset;
    for (Index i = 0; i < param.Size(); ++i) {
      float v;
      std::memcpy(&v, src + i * sizeof(float), sizeof(float));
      param.value.data()[i] = static_cast<double>(v);
    }
    param.ZeroGrad();
  });
  if (index != entries.size())
    throw FormatError(path + ": unexpected extra tensor " + entries[index].name);
}

}  // namespace

void SaveCheckpoint(const ModelParams& p, const std::string& path) {
  json tensors = json::array();
  uint64_t offset = 0;
  p.Visit([&](const Parameter& param) {
    tensors.push_back({{"name", param.name}, {"shape", param.Shape()}, {"offset", offset}});
    offset += static_cast<uint64_t>(param.Size()) * sizeof(float);
  });
  json meta{{"config", json::parse(ToJson(p.config))}, {"tensors", tensors}};
  const std::string text = meta.dump();

  std::string out;
  out.reserve(16 + text.size() + offset);
  out.append(kMagic, 4);
  Put<uint32_t>(&out, kCheckpointVersion);
  Put<uint64_t>(&out, text.size());
  out.append(text);
  p.Visit([&](const Parameter& param) {
    for (Index i = 0; i < param.Size(); ++i)
      Put<float>(&out, static_cast<float>(param.value.data()[i]));
  });

  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write checkpoint " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed for checkpoint " + path);
}

ModelParams LoadCheckpoint(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open checkpoint " + path);
  std::vector<char> in((std::istreambuf_iterator<char>(file)),
                       std::istreambuf_iterator<char>());
  if (in.size() < 16) throw FormatError(path + ": truncated checkpoint header");
  if (std::memcmp(in.data(), kMagic, 4) != 0)
    throw FormatError(path + ": bad magic, not an FSCA checkpoint");
  const auto version = Get<uint32_t>(in, 4);
  if (version != kCheckpointVersion)
    throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version));
  const auto meta_size = Get<uint64_t>(in, 8);
  if (meta_size > in.size() - 16) throw FormatError(path + ": truncated metadata");

  json meta;
  ModelConfig cfg;
  std::vector<TensorEntry> entries;
  try {
    meta = json::parse(in.begin() + 16, in.begin() + 16 + static_cast<std::ptrdiff_t>(meta_size));
    cfg = ParseModelConfig(meta.at("config").dump());
    for (const auto& t : meta.at("tensors")) {
      entries.push_back({t.at("name").get<std::string>(),
                         t.at("shape").get<std::vector<int64_t>>(),
                         t.at("offset").get<uint64_t>()});
    }
  } catch (const json::exception& e) {
    throw FormatError(path + ": malformed metadata: " + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(path + ": invalid embedded config: " + e.what());
  }
  ModelParams p = ZeroParams(cfg);
  Fill(&p, entries, in.data() + 16 + meta_size, in.size() - 16 - meta_size, path);
  return p;
}

ModelParams LoadCheckpoint(const std::string& path, const ModelConfig& expected) {
  ModelParams loaded = LoadCheckpoint(path);
  ModelParams reference = ZeroParams(expected);
  std::vector<const Parameter*> want, have;
  reference.Visit([&](const Parameter& p) { want.push_back(&p); });
  loaded.Visit([&](const Parameter& p) { have.push_back(&p); });
  for (size_t i = 0; i < want.size(); ++i) {
    if (i >= have.size())
      throw FormatError(path + ": checkpoint lacks tensor " + want[i]->name);
    if (want[i]->name != have[i]->name || want[i]->Shape() != have[i]->Shape()) {
      throw FormatError(path + ": first mismatched tensor " + want[i]->name + " " +
                        ShapeString(want[i]->Shape()) + " (checkpoint: " +
                        have[i]->name + " " + ShapeString(have[i]->Shape()) + ")");
    }
  }
  if (have.size() > want.size())
    throw FormatError(path + ": checkpoint has extra tensor " + have[want.size()]->name);
  if (!(loaded.config == expected)) {
    // Shapes agree but hyperparameters (dilations, heads, mask, cirm) differ.
    throw FormatError(path + ": checkpoint config differs from the requested config");
  }
  return loaded;
}

}  // namespace fsca
