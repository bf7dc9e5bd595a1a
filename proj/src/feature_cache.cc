// spectex/feature_cache.cc

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

#include "spectex/feature_cache.h"

#include <zlib.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "spectex/binary_io.h"
#include "spectex/error.h"

namespace spectex {

namespace {

constexpr std::string_view kMagic = "FCACHE1\n";

std::uint32_t crc_of(const std::string& bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  const auto* p = reinterpret_cast<const Bytef*>(bytes.data());
  std::size_t left = bytes.size();
  while (left > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    left -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::string payload_bytes(const std::vector<double>& data) {
  std::ostringstream os(std::ios::binary);
  write_f64_le(os, data);
  return std::move(os).str();
}

}  // namespace

FeatureMatrix FeatureMatrix::from_rows(std::span<const std::vector<double>> rows) {
  FeatureMatrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows[0].size();
  m.data.reserve(m.rows * m.cols);
  for (const auto& r : rows) {
    if (r.size() != m.cols) throw DataError("feature matrix: rows differ in length");
    m.data.insert(m.data.end(), r.begin(), r.end());
  }
  return m;
}

std::vector<std::vector<double>> FeatureMatrix::to_rows() const {
  std::vector<std::vector<double>> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r].assign(data.begin() + r * cols, data.begin() + (r + 1) * cols);
  return out;
}

void write_feature_cache(const std::filesystem::path& path, const FeatureMatrix& m) {
  if (m.data.size() != m.rows * m.cols) throw DataError("feature cache: size does not match rows*cols");
  const std::string payload = payload_bytes(m.data);
  const std::uint32_t crc = crc_of(payload);
  // Unique temporary name so concurrent writers never share a file.
  static std::atomic<unsigned> counter{0};
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp" << std::hash<std::thread::id>{}(std::this_thread::get_id())
           << '_' << counter++;
  const std::filesystem::path tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw DataError("cannot write " + tmp.string());
    os << kMagic << m.rows << ' ' << m.cols << '\n';
    os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    const unsigned char trailer[4] = {static_cast<unsigned char>(crc), static_cast<unsigned char>(crc >> 8),
                                      static_cast<unsigned char>(crc >> 16),
                                      static_cast<unsigned char>(crc >> 24)};
    os.write(reinterpret_cast<const char*>(trailer), 4);
    if (!os) throw DataError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

FeatureMatrix read_feature_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  expect_magic(is, kMagic, "feature cache");
  const auto hdr = read_header_ints(is, 2, "feature cache");
  const std::uint64_t limit = 1ull << 34;
  if (hdr[0] > limit || hdr[1] > limit || (hdr[1] != 0 && hdr[0] > limit / hdr[1]))
    throw DataError("feature cache: header out of range");
  FeatureMatrix m;
  m.rows = hdr[0];
  m.cols = hdr[1];
  const std::size_t nbytes = m.rows * m.cols * sizeof(double);
  std::string payload(nbytes, '\0');
  is.read(payload.data(), static_cast<std::streamsize>(nbytes));
  unsigned char trailer[4];
  if (static_cast<std::size_t>(is.gcount()) != nbytes ||
      !is.read(reinterpret_cast<char*>(trailer), 4))
    throw DataError("feature cache: truncated file " + path.string());
  if (!at_eof(is)) throw DataError("feature cache: trailing bytes in " + path.string());
  const std::uint32_t stored = static_cast<std::uint32_t>(trailer[0]) |
                               (static_cast<std::uint32_t>(trailer[1]) << 8) |
                               (static_cast<std::uint32_t>(trailer[2]) << 16) |
                               (static_cast<std::uint32_t>(trailer[3]) << 24);
  if (stored != crc_of(payload)) throw DataError("feature cache: checksum mismatch in " + path.string());
  std::istringstream ps(payload, std::ios::binary);
  m.data = read_f64_le(ps, m.rows * m.cols, "feature cache");
  return m;
}

}  // namespace spectex
