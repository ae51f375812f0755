// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fsca/audio.h"

namespace fsca {
namespace {

uint16_t ReadU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<unsigned char>* out, uint16_t v) {
  out->push_back(v & 0xff);
  out->push_back((v >> 8) & 0xff);
}

void PutU32(std::vector<unsigned char>* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back((v >> (8 * i)) & 0xff);
}

void PutTag(std::vector<unsigned char>* out, const char* tag) {
  out->insert(out->end(), tag, tag + 4);
}

}  // namespace

Waveform ReadWav(const std::string& path, int expected_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(path + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  const unsigned char* data = nullptr;
  size_t data_size = 0;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    uint32_t size = ReadU32(chunk + 4);
    size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Tolerate a data chunk whose declared size overruns a truncated file.
      if (std::memcmp(chunk, "data", 4) != 0)
        throw FormatError(path + ": truncated chunk");
      size = static_cast<uint32_t>(bytes.size() - body);
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError(path + ": fmt chunk too small");
      format = ReadU16(bytes.data() + body);
      channels = ReadU16(bytes.data() + body + 2);
      rate = ReadU32(bytes.data() + body + 4);
      bits = ReadU16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw FormatError(path + ": missing fmt chunk");
  if (data == nullptr) throw FormatError(path + ": missing data chunk");
  if (format != 1)
    throw FormatError(path + ": expected PCM (format 1), got format " +
                      std::to_string(format));
  if (channels != 1)
    throw FormatError(path + ": expected mono, got " + std::to_string(channels) +
                      " channels");
  if (bits != 16)
    throw FormatError(path + ": expected 16-bit samples, got " +
                      std::to_string(bits));
  if (expected_rate > 0 && static_cast<int>(rate) != expected_rate)
    throw FormatError(path + ": expected " + std::to_string(expected_rate) +
                      " Hz, got " + std::to_string(rate) + " Hz");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  const size_t count = data_size / 2;
  w.samples.resize(count);
  for (size_t i = 0; i < count; ++i) {
    auto v = static_cast<int16_t>(ReadU16(data + 2 * i));
    w.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return w;
}

void ClipToPcmRange(Waveform* w) {
  for (double& s : w->samples) s = std::clamp(s, -1.0, kMaxPcmAmplitude);
}

void WriteWav(const Waveform& w, const std::string& path) {
  if (w.sample_rate <= 0) throw FormatError("WriteWav: sample rate must be positive");
  const auto data_bytes = static_cast<uint32_t>(w.samples.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  PutTag(&out, "RIFF");
  PutU32(&out, 36 + data_bytes);
  PutTag(&out, "WAVE");
  PutTag(&out, "fmt ");
  PutU32(&out, 16);
  PutU16(&out, 1);  // PCM
  PutU16(&out, 1);  // mono
  PutU32(&out, static_cast<uint32_t>(w.sample_rate));
  PutU32(&out, static_cast<uint32_t>(w.sample_rate) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  PutTag(&out, "data");
  PutU32(&out, data_bytes);
  for (double s : w.samples) {
    if (!std::isfinite(s)) throw FormatError("WriteWav: non-finite sample");
    double q = std::round(std::clamp(s, -1.0, kMaxPcmAmplitude) * 32768.0);
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path);
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed for " + path);
}

}  // namespace fsca
