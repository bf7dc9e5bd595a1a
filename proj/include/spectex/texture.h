// spectex/texture.h

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

// Texture descriptors over gray images: LBP, multi-block LBP, LPQ and BSIF.
//
// Every operator first produces a CodeImage (one integer code per valid
// pixel, borders skipped) and then a normalised histogram. Codes depend only
// on a `support` x `support` pixel square, which lets dense block descriptors
// be read off one global code image.

#ifndef SPECTEX_TEXTURE_H_
#define SPECTEX_TEXTURE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spectex/gray_image.h"

namespace spectex {

enum class DescriptorKind { kLbp, kMbLbp, kLpq, kBsif };

std::string_view to_string(DescriptorKind kind);
DescriptorKind parse_descriptor_kind(std::string_view name);  // "lbp", "mblbp", ...

struct DescriptorVector {
  std::vector<double> values;
  DescriptorKind kind = DescriptorKind::kLbp;
  std::string fingerprint;  // parameters used
};

// Code (i, j) depends on pixels [i, i+support) x [j, j+support).
struct CodeImage {
  int rows = 0;
  int cols = 0;
  int support = 0;
  std::vector<std::uint32_t> codes;

  std::uint32_t at(int r, int c) const {
    return codes[static_cast<std::size_t>(r) * cols + c];
  }
};

// ---------------------------------------------------------------- LBP

// Circular LBP: code = sum_i [g_i >= g_c] 2^i, neighbours at angle 2 pi i/N
// on a circle of the given radius, bilinearly interpolated. Offsets within
// 1e-6 of an integer snap to it; g_i within 1e-9 of g_c counts as equal.
CodeImage lbp_code_image(const GrayImage& img, int radius, int neighbors);

// N(N-1)+3: all-zeros, all-ones, N-1 run lengths x N rotations, and one bin
// shared by every non-uniform pattern.
int lbp_uniform_bin_count(int neighbors);
// Bin 0: all zeros; bin 1: all ones; bin 2 + (k-1) N + r: k ones starting at
// bit r; last bin: non-uniform.
int lbp_uniform_bin(std::uint32_t code, int neighbors);

// Single-scale uniform-pattern histogram, l1-normalised.
DescriptorVector lbp_histogram(const GrayImage& img, int radius, int neighbors);

inline const std::vector<std::pair<int, int>>& default_lbp_scales() {
  static const std::vector<std::pair<int, int>> scales{{1, 8}, {2, 16}, {3, 24}};
  return scales;
}

// Concatenation of the (1,8), (2,16), (3,24) histograms: 59 + 243 + 555 bins.
DescriptorVector lbp_multiscale_histogram(const GrayImage& img);

// ---------------------------------------------------------------- MB-LBP

// Summed-area table over 64-bit integer sums.
class IntegralImage {
 public:
  explicit IntegralImage(const GrayImage& img);
  std::int64_t rect_sum(int row, int col, int h, int w) const;
  double rect_mean(int row, int col, int h, int w) const {
    return static_cast<double>(rect_sum(row, col, h, w)) / (static_cast<double>(h) * w);
  }

 private:
  int width_ = 0;
  std::vector<std::int64_t> table_;  // (height+1) x (width+1)
};

// Each code compares the eight outer R x R rectangles of a 3R x 3R grid with
// the centre rectangle (>= rule). Neighbour bit order is counter-clockwise
// from east: E, NE, N, NW, W, SW, S, SE (north = smaller row index).
CodeImage mb_lbp_code_image(const GrayImage& img, int rect_side);
DescriptorVector mb_lbp_histogram(const GrayImage& img, int rect_side);

// ---------------------------------------------------------------- LPQ

// 8x8 row-major transform applied to [Re F_u0..u3, Im F_u0..u3]. Rows are
// eigenvectors of the covariance of those coefficients under the model
// corr(p, q) = rho^|p - q|, sorted by decreasing eigenvalue, each with its
// largest-magnitude entry positive. rho == 0 returns the identity.
std::array<double, 64> lpq_whitening_matrix(int window, double rho);

// Frequencies u0=(a,0), u1=(0,a), u2=(a,a), u3=(a,-a), a = 1/window, uniform
// window; first coordinate is horizontal. Bit j is set iff component j > 1e-9
// (responses of integer pixels that cancel exactly must not depend on rounding).
CodeImage lpq_code_image(const GrayImage& img, int window, double rho);
DescriptorVector lpq_histogram(const GrayImage& img, int window, double rho);

// ---------------------------------------------------------------- BSIF

// `count` square filters of odd side `side`, taps filter-major, row-major.
struct FilterBank {
  int side = 0;
  int count = 0;
  std::vector<double> taps;

  std::span<const double> filter(int i) const {
    const std::size_t n = static_cast<std::size_t>(side) * side;
    return {taps.data() + n * i, n};
  }
  bool operator==(const FilterBank&) const = default;
};

// Checks shape and finiteness, re-centres filters whose |mean| <= 1e-4, and
// rejects the others. Throws DataError.
FilterBank validate_filter_bank(FilterBank bank);

// File format: "BSIF1\n", "l N\n", then l*l*N little-endian doubles.
FilterBank load_filter_bank(const std::filesystem::path& path);
void write_filter_bank(const std::filesystem::path& path, const FilterBank& bank);

struct IcaOptions {
  int max_iters = 500;
  double tol = 1e-6;
};

// Patches (each side*side values, row-major) have their DC removed and are
// centred, PCA-whitened to `count` dimensions, and unmixed with symmetric
// FastICA (tanh). Filters are the unmixing rows projected back to pixels.
FilterBank learn_filters_ica(std::span<const std::vector<double>> patches, int side,
                             int count, std::uint64_t seed, const IcaOptions& opts = {});

// Bank learned from the bundled synthetic natural-image patch generator with
// a fixed seed. Deterministic; memoised per (side, count).
std::shared_ptr<const FilterBank> default_filter_bank(int side, int count);

// code = sum_i b_i 2^i (filter i -> bit i), b_i = [sum_{u,v} W_i(u,v) X(u,v) > 1e-9].
CodeImage bsif_code_image(const GrayImage& img, const FilterBank& bank);

// 2^N-bin histogram folded to 128 components (adjacent groups summed when
// 2^N > 128, zero padded when smaller), l1-normalised.
DescriptorVector bsif_histogram(const GrayImage& img, const FilterBank& bank);

inline constexpr int kBsifHistogramSize = 128;

// ---------------------------------------------------------------- configs

// One descriptor family with one or more parameter settings; the descriptor
// is the concatenation of the per-setting normalised histograms.
struct DescriptorConfig {
  DescriptorKind kind = DescriptorKind::kBsif;
  std::vector<std::pair<int, int>> lbp_scales = default_lbp_scales();
  std::vector<int> mb_lbp_sides{3};
  std::vector<int> lpq_windows{7};
  double lpq_rho = 0.9;
  std::vector<std::shared_ptr<const FilterBank>> bsif_banks;

  std::string fingerprint() const;
  std::size_t dimension() const;
  // Largest code support among the settings (minimum usable image side).
  int min_side() const;
};

DescriptorVector describe(const GrayImage& img, const DescriptorConfig& config);

// Descriptors of the block x block windows of a top-left anchored grid with
// the given stride (partial blocks dropped), row-major. Each one equals
// describe() of the cropped block.
std::vector<DescriptorVector> dense_local_descriptors(const GrayImage& img,
                                                      const DescriptorConfig& config,
                                                      int block, int stride);

std::size_t dense_block_count(int height, int width, int block, int stride);

}  // namespace spectex

#endif  // SPECTEX_TEXTURE_H_
