// spectex/binary_io.cc

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

#include "spectex/binary_io.h"

#include <bit>
#include <cstdio>
#include <sstream>

#include "spectex/error.h"

namespace spectex {

void write_f64_le(std::ostream& os, std::span<const double> values) {
  std::vector<char> buf(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b)
      buf[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::vector<double> read_f64_le(std::istream& is, std::size_t count,
                                std::string_view what) {
  std::vector<char> buf(count * 8);
  is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(is.gcount()) != buf.size())
    throw DataError(std::string(what) + ": truncated payload (expected " +
                    std::to_string(count) + " values)");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(
                  static_cast<unsigned char>(buf[i * 8 + b]))
              << (8 * b);
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

void expect_magic(std::istream& is, std::string_view magic,
                  std::string_view what) {
  std::string got(magic.size(), '\0');
  is.read(got.data(), static_cast<std::streamsize>(got.size()));
  if (static_cast<std::size_t>(is.gcount()) != magic.size() || got != magic)
    throw DataError(std::string(what) + ": bad magic");
}

std::vector<std::uint64_t> read_header_ints(std::istream& is, std::size_t count,
                                            std::string_view what) {
  std::string line;
  if (!std::getline(is, line))
    throw DataError(std::string(what) + ": missing header line");
  std::istringstream ss(line);
  std::vector<std::uint64_t> out;
  std::string tok;
  while (ss >> tok) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw DataError(std::string(what) + ": malformed header '" + line + "'");
    try {
      out.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      throw DataError(std::string(what) + ": malformed header '" + line + "'");
    }
  }
  if (out.size() != count)
    throw DataError(std::string(what) + ": header must hold " +
                    std::to_string(count) + " integers, got '" + line + "'");
  return out;
}

bool at_eof(std::istream& is) {
  return is.peek() == std::char_traits<char>::eof();
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace spectex
