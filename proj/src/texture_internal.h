// spectex/texture_internal.h

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

#ifndef SPECTEX_TEXTURE_INTERNAL_H_
#define SPECTEX_TEXTURE_INTERNAL_H_

#include <vector>

#include "spectex/texture.h"

namespace spectex::internal {

// LPQ and BSIF responses at or below this count as zero. Integer pixels make
// exact cancellations common (symmetric neighbourhoods, equal column sums),
// and rounding would otherwise set those bits arbitrarily.
inline constexpr double kResponseTolerance = 1e-9;

// A code image with every code already mapped to its histogram bin.
struct CodeHistogram {
  int rows = 0, cols = 0, support = 0;
  std::vector<std::uint32_t> bin;  // rows x cols
  int bins = 0;
  // Number of output components; BSIF folds/pads its 2^N bins to 128.
  int output_size = 0;
  bool bsif_fold = false;
};

// Raw counts over codes whose support lies inside the pixel rectangle
// [row, row+h) x [col, col+w).
std::vector<double> count_codes(const CodeHistogram& ch, int row, int col, int h, int w);

// Divides by the sum. Throws DataError if the sum is zero.
void normalize_l1(std::vector<double>& v);

std::vector<CodeHistogram> code_histograms(const GrayImage& img,
                                           const DescriptorConfig& config);

std::vector<double> fold_bsif_bins(const std::vector<double>& raw);

}  // namespace spectex::internal

#endif  // SPECTEX_TEXTURE_INTERNAL_H_
