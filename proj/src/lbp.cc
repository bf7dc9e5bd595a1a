// spectex/lbp.cc

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

#include <bit>
#include <cmath>
#include <numbers>

#include "spectex/error.h"
#include "spectex/texture.h"
#include "texture_internal.h"

namespace spectex {

namespace {

struct NeighborOffset {
  int row = 0, col = 0;  // integer part relative to the centre
  double frac_row = 0.0, frac_col = 0.0;
};

// Interpolated samples this close to the centre count as equal to it. The
// diagonal weights admit exact ties on integer pixels that rounding would
// otherwise break either way.
constexpr double kTieTolerance = 1e-9;

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-6 ? r : v;
}

std::vector<NeighborOffset> circle_offsets(int radius, int neighbors) {
  std::vector<NeighborOffset> out(neighbors);
  for (int i = 0; i < neighbors; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / neighbors;
    const double dy = snap(-radius * std::sin(angle));
    const double dx = snap(radius * std::cos(angle));
    const double fy = std::floor(dy), fx = std::floor(dx);
    out[i] = {static_cast<int>(fy), static_cast<int>(fx), dy - fy, dx - fx};
  }
  return out;
}

// Nested lerps return the exact pixel value on flat neighbourhoods.
double sample(const GrayImage& img, int r0, int c0, double fy, double fx) {
  const double p00 = img.at(r0, c0);
  double top = p00;
  if (fx > 0.0) top = p00 + fx * (img.at(r0, c0 + 1) - p00);
  if (fy == 0.0) return top;
  const double p10 = img.at(r0 + 1, c0);
  double bottom = p10;
  if (fx > 0.0) bottom = p10 + fx * (img.at(r0 + 1, c0 + 1) - p10);
  return top + fy * (bottom - top);
}

}  // namespace

std::string_view to_string(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::kLbp: return "lbp";
    case DescriptorKind::kMbLbp: return "mblbp";
    case DescriptorKind::kLpq: return "lpq";
    case DescriptorKind::kBsif: return "bsif";
  }
  return "?";
}

DescriptorKind parse_descriptor_kind(std::string_view name) {
  if (name == "lbp") return DescriptorKind::kLbp;
  if (name == "mblbp" || name == "mb-lbp") return DescriptorKind::kMbLbp;
  if (name == "lpq") return DescriptorKind::kLpq;
  if (name == "bsif") return DescriptorKind::kBsif;
  throw ConfigError("unknown descriptor '" + std::string(name) + "'");
}

CodeImage lbp_code_image(const GrayImage& img, int radius, int neighbors) {
  if (radius < 1) throw ConfigError("lbp: radius must be >= 1");
  if (neighbors < 4 || neighbors > 32) throw ConfigError("lbp: neighbors must be in [4, 32]");
  const int support = 2 * radius + 1;
  if (img.height < support || img.width < support)
    throw DataError("lbp: image smaller than 2*radius+1");

  const std::vector<NeighborOffset> offs = circle_offsets(radius, neighbors);
  CodeImage out;
  out.rows = img.height - 2 * radius;
  out.cols = img.width - 2 * radius;
  out.support = support;
  out.codes.resize(static_cast<std::size_t>(out.rows) * out.cols);
  for (int r = 0; r < out.rows; ++r) {
    for (int c = 0; c < out.cols; ++c) {
      const int cr = r + radius, cc = c + radius;
      const double center = img.at(cr, cc);
      std::uint32_t code = 0;
      for (int i = 0; i < neighbors; ++i) {
        const NeighborOffset& o = offs[i];
        const double g = sample(img, cr + o.row, cc + o.col, o.frac_row, o.frac_col);
        if (g - center >= -kTieTolerance) code |= (1u << i);
      }
      out.codes[static_cast<std::size_t>(r) * out.cols + c] = code;
    }
  }
  return out;
}

int lbp_uniform_bin_count(int neighbors) { return neighbors * (neighbors - 1) + 3; }

int lbp_uniform_bin(std::uint32_t code, int neighbors) {
  const std::uint64_t mask = (std::uint64_t{1} << neighbors) - 1;
  const std::uint64_t c = code & mask;
  if (c == 0) return 0;
  if (c == mask) return 1;
  const std::uint64_t rot = ((c << 1) | (c >> (neighbors - 1))) & mask;
  if (std::popcount(c ^ rot) != 2) return neighbors * (neighbors - 1) + 2;
  const int ones = std::popcount(c);
  int start = 0;
  for (int i = 0; i < neighbors; ++i) {
    const int prev = (i + neighbors - 1) % neighbors;
    if (((c >> i) & 1) && !((c >> prev) & 1)) {
      start = i;
      break;
    }
  }
  return 2 + (ones - 1) * neighbors + start;
}

DescriptorVector lbp_histogram(const GrayImage& img, int radius, int neighbors) {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::kLbp;
  cfg.lbp_scales = {{radius, neighbors}};
  return describe(img, cfg);
}

DescriptorVector lbp_multiscale_histogram(const GrayImage& img) {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::kLbp;
  cfg.lbp_scales = default_lbp_scales();
  return describe(img, cfg);
}

IntegralImage::IntegralImage(const GrayImage& img)
    : width_(img.width),
      table_(static_cast<std::size_t>(img.height + 1) * (img.width + 1), 0) {
  const int stride = img.width + 1;
  for (int r = 0; r < img.height; ++r) {
    std::int64_t row_sum = 0;
    for (int c = 0; c < img.width; ++c) {
      row_sum += img.at(r, c);
      table_[static_cast<std::size_t>(r + 1) * stride + c + 1] =
          table_[static_cast<std::size_t>(r) * stride + c + 1] + row_sum;
    }
  }
}

std::int64_t IntegralImage::rect_sum(int row, int col, int h, int w) const {
  const int stride = width_ + 1;
  auto t = [&](int r, int c) { return table_[static_cast<std::size_t>(r) * stride + c]; };
  return t(row + h, col + w) - t(row, col + w) - t(row + h, col) + t(row, col);
}

CodeImage mb_lbp_code_image(const GrayImage& img, int rect_side) {
  if (rect_side < 1) throw ConfigError("mb-lbp: rectangle side must be >= 1");
  const int support = 3 * rect_side;
  if (img.height < support || img.width < support)
    throw DataError("mb-lbp: image smaller than 3 * rectangle side");
  static constexpr int kGrid[8][2] = {{1, 2}, {0, 2}, {0, 1}, {0, 0},
                                      {1, 0}, {2, 0}, {2, 1}, {2, 2}};
  const IntegralImage integral(img);
  CodeImage out;
  out.rows = img.height - support + 1;
  out.cols = img.width - support + 1;
  out.support = support;
  out.codes.resize(static_cast<std::size_t>(out.rows) * out.cols);
  const int s = rect_side;
  for (int r = 0; r < out.rows; ++r) {
    for (int c = 0; c < out.cols; ++c) {
      // Equal-area rectangles: comparing sums is comparing means.
      const std::int64_t center = integral.rect_sum(r + s, c + s, s, s);
      std::uint32_t code = 0;
      for (int i = 0; i < 8; ++i) {
        const std::int64_t v =
            integral.rect_sum(r + kGrid[i][0] * s, c + kGrid[i][1] * s, s, s);
        if (v >= center) code |= (1u << i);
      }
      out.codes[static_cast<std::size_t>(r) * out.cols + c] = code;
    }
  }
  return out;
}

DescriptorVector mb_lbp_histogram(const GrayImage& img, int rect_side) {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::kMbLbp;
  cfg.mb_lbp_sides = {rect_side};
  return describe(img, cfg);
}

}  // namespace spectex
