// spectex/audio_io.cc

// Copyright 2026  The spectex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spectex/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>

#include "spectex/error.h"

namespace spectex {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

void validate_clip(const AudioClip& clip) {
  if (clip.sample_rate <= 0) throw DataError("audio clip: non-positive sample rate");
  if (clip.samples.empty()) throw DataError("audio clip: no samples");
  for (double s : clip.samples)
    if (!std::isfinite(s)) throw DataError("audio clip: non-finite sample");
}

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open wav file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = "wav file " + path.string();
  if (bytes.size() < 12 || std::string(bytes.begin(), bytes.begin() + 4) != "RIFF" ||
      std::string(bytes.begin() + 8, bytes.begin() + 12) != "WAVE")
    throw DataError(where + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  int channels = 0, bits = 0, rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string id(bytes.begin() + pos, bytes.begin() + pos + 4);
    std::size_t size = le32(&bytes[pos + 4]);
    std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (size < 16 || body + size > bytes.size())
        throw DataError(where + ": truncated fmt chunk");
      std::uint16_t format = le16(&bytes[body]);
      channels = le16(&bytes[body + 2]);
      rate = static_cast<int>(le32(&bytes[body + 4]));
      bits = le16(&bytes[body + 14]);
      if (format != 1)
        throw DataError(where + ": audio format " + std::to_string(format) +
                        " is not PCM");
      if (bits != 16)
        throw DataError(where + ": " + std::to_string(bits) +
                        " bits per sample, only 16-bit PCM is supported");
      if (channels != 1)
        throw DataError(where + ": " + std::to_string(channels) +
                        " channels, only mono is supported");
      if (rate <= 0) throw DataError(where + ": invalid sample rate");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw DataError(where + ": data chunk before fmt chunk");
      if (body + size > bytes.size())
        throw DataError(where + ": truncated data chunk");
      if (size % 2 != 0) throw DataError(where + ": odd data chunk size");
      AudioClip clip;
      clip.sample_rate = rate;
      clip.samples.resize(size / 2);
      for (std::size_t i = 0; i < clip.samples.size(); ++i) {
        auto v = static_cast<std::int16_t>(le16(&bytes[body + 2 * i]));
        clip.samples[i] = v / 32768.0;
      }
      if (clip.samples.empty()) throw DataError(where + ": empty data chunk");
      return clip;
    }
    pos = body + size + (size & 1);
  }
  throw DataError(where + (have_fmt ? ": no data chunk" : ": no fmt chunk"));
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
  validate_clip(clip);
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);  // PCM
  put16(out, 1);  // mono
  put32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (double s : clip.samples) {
    double q = std::nearbyint(s * 32768.0);
    q = std::clamp(q, -32768.0, 32767.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write wav file " + path.string());
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw DataError("write failed for " + path.string());
}

AudioClip peak_normalize(const AudioClip& clip) {
  double peak = 0.0;
  for (double s : clip.samples) {
    if (!std::isfinite(s)) throw DataError("peak_normalize: non-finite sample");
    peak = std::max(peak, std::abs(s));
  }
  AudioClip out = clip;
  if (peak == 0.0) return out;
  for (double& s : out.samples) s /= peak;
  return out;
}

}  // namespace spectex
