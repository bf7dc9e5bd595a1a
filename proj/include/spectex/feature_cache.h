// spectex/feature_cache.h

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

// On-disk cache for matrices and vector lists:
//   "FCACHE1\n", "rows cols\n", rows*cols LE doubles (row-major), then the
//   CRC-32 of those payload bytes as a 4-byte little-endian integer.

#ifndef SPECTEX_FEATURE_CACHE_H_
#define SPECTEX_FEATURE_CACHE_H_

#include <filesystem>
#include <span>
#include <vector>

namespace spectex {

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  // All rows must have the same length.
  static FeatureMatrix from_rows(std::span<const std::vector<double>> rows);
  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const FeatureMatrix&) const = default;
};

// Written to a temporary name and renamed into place.
void write_feature_cache(const std::filesystem::path& path, const FeatureMatrix& m);

// Throws DataError on a bad header, truncation or checksum mismatch.
FeatureMatrix read_feature_cache(const std::filesystem::path& path);

}  // namespace spectex

#endif  // SPECTEX_FEATURE_CACHE_H_
