// spectex/binary_io.h

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

// Helpers shared by the binary model formats (BSIF1, GMM1, LSVM1, FCACHE1).
// All of them are: a magic line, an ASCII header line, then little-endian
// IEEE-754 doubles.

#ifndef SPECTEX_BINARY_IO_H_
#define SPECTEX_BINARY_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spectex {

void write_f64_le(std::ostream& os, std::span<const double> values);

// Reads exactly `count` doubles; throws DataError on short read.
std::vector<double> read_f64_le(std::istream& is, std::size_t count,
                                std::string_view what);

// Reads one '\n'-terminated line and compares it with `magic` (which must
// include the trailing newline).
void expect_magic(std::istream& is, std::string_view magic,
                  std::string_view what);

// Reads the ASCII header line and splits it into whitespace separated
// non-negative integers. Throws DataError if the count differs.
std::vector<std::uint64_t> read_header_ints(std::istream& is, std::size_t count,
                                            std::string_view what);

// True if the stream has no bytes left.
bool at_eof(std::istream& is);

// 64-bit FNV-1a, used for config fingerprints and derived seeds.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t seed = 1469598103934665603ULL);

std::string hex64(std::uint64_t v);

}  // namespace spectex

#endif  // SPECTEX_BINARY_IO_H_
