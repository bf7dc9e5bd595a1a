// spectex/dense.cc

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

#include <algorithm>
#include <sstream>

#include "spectex/binary_io.h"
#include "spectex/error.h"
#include "spectex/texture.h"
#include "texture_internal.h"

namespace spectex {

namespace {

std::string bank_tag(const FilterBank& bank) {
  std::string bytes(reinterpret_cast<const char*>(bank.taps.data()),
                    bank.taps.size() * sizeof(double));
  return std::to_string(bank.side) + "x" + std::to_string(bank.count) + "#" +
         hex64(fnv1a64(bytes)).substr(0, 8);
}

void check_config(const DescriptorConfig& c) {
  switch (c.kind) {
    case DescriptorKind::kLbp:
      if (c.lbp_scales.empty()) throw ConfigError("lbp: no scales configured");
      break;
    case DescriptorKind::kMbLbp:
      if (c.mb_lbp_sides.empty()) throw ConfigError("mb-lbp: no rectangle sizes configured");
      break;
    case DescriptorKind::kLpq:
      if (c.lpq_windows.empty()) throw ConfigError("lpq: no windows configured");
      break;
    case DescriptorKind::kBsif:
      if (c.bsif_banks.empty()) throw ConfigError("bsif: no filter banks configured");
      for (const auto& b : c.bsif_banks)
        if (!b) throw ConfigError("bsif: null filter bank");
      break;
  }
}

}  // namespace

std::string DescriptorConfig::fingerprint() const {
  std::ostringstream os;
  os << to_string(kind) << ':';
  switch (kind) {
    case DescriptorKind::kLbp:
      for (std::size_t i = 0; i < lbp_scales.size(); ++i)
        os << (i ? ";" : "") << lbp_scales[i].first << ',' << lbp_scales[i].second;
      break;
    case DescriptorKind::kMbLbp:
      for (std::size_t i = 0; i < mb_lbp_sides.size(); ++i) os << (i ? ";" : "") << mb_lbp_sides[i];
      break;
    case DescriptorKind::kLpq:
      for (std::size_t i = 0; i < lpq_windows.size(); ++i) os << (i ? ";" : "") << lpq_windows[i];
      os << "@rho=" << lpq_rho;
      break;
    case DescriptorKind::kBsif:
      for (std::size_t i = 0; i < bsif_banks.size(); ++i)
        os << (i ? ";" : "") << (bsif_banks[i] ? bank_tag(*bsif_banks[i]) : "null");
      break;
  }
  return os.str();
}

std::size_t DescriptorConfig::dimension() const {
  check_config(*this);
  std::size_t d = 0;
  switch (kind) {
    case DescriptorKind::kLbp:
      for (const auto& s : lbp_scales) d += lbp_uniform_bin_count(s.second);
      break;
    case DescriptorKind::kMbLbp: d = 256 * mb_lbp_sides.size(); break;
    case DescriptorKind::kLpq: d = 256 * lpq_windows.size(); break;
    case DescriptorKind::kBsif: d = kBsifHistogramSize * bsif_banks.size(); break;
  }
  return d;
}

int DescriptorConfig::min_side() const {
  check_config(*this);
  int m = 0;
  switch (kind) {
    case DescriptorKind::kLbp:
      for (const auto& s : lbp_scales) m = std::max(m, 2 * s.first + 1);
      break;
    case DescriptorKind::kMbLbp:
      for (int s : mb_lbp_sides) m = std::max(m, 3 * s);
      break;
    case DescriptorKind::kLpq:
      for (int w : lpq_windows) m = std::max(m, w);
      break;
    case DescriptorKind::kBsif:
      for (const auto& b : bsif_banks) m = std::max(m, b->side);
      break;
  }
  return m;
}

namespace internal {

std::vector<double> count_codes(const CodeHistogram& ch, int row, int col, int h, int w) {
  std::vector<double> counts(ch.bins, 0.0);
  // Code (i, j) covers pixels [i, i+support) x [j, j+support).
  const int r_end = std::min(ch.rows, row + h - ch.support + 1);
  const int c_end = std::min(ch.cols, col + w - ch.support + 1);
  std::vector<std::uint32_t> tally(ch.bins, 0);
  for (int r = row; r < r_end; ++r) {
    const std::uint32_t* b = ch.bin.data() + static_cast<std::size_t>(r) * ch.cols;
    for (int c = col; c < c_end; ++c) ++tally[b[c]];
  }
  for (int i = 0; i < ch.bins; ++i) counts[i] = tally[i];
  if (ch.bsif_fold) return fold_bsif_bins(counts);
  return counts;
}

void normalize_l1(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  if (!(sum > 0.0)) throw DataError("histogram is empty (region smaller than the operator)");
  for (double& x : v) x /= sum;
}

std::vector<CodeHistogram> code_histograms(const GrayImage& img, const DescriptorConfig& config) {
  check_config(config);
  std::vector<CodeHistogram> out;
  auto add = [&](const CodeImage& ci, int bins, int output_size, bool fold, auto&& bin_of) {
    CodeHistogram ch;
    ch.rows = ci.rows;
    ch.cols = ci.cols;
    ch.support = ci.support;
    ch.bins = bins;
    ch.output_size = output_size;
    ch.bsif_fold = fold;
    ch.bin.resize(ci.codes.size());
    for (std::size_t i = 0; i < ci.codes.size(); ++i) ch.bin[i] = bin_of(ci.codes[i]);
    out.push_back(std::move(ch));
  };
  auto identity = [](std::uint32_t c) { return c; };
  switch (config.kind) {
    case DescriptorKind::kLbp:
      for (const auto& [radius, n] : config.lbp_scales) {
        const int bins = lbp_uniform_bin_count(n);
        add(lbp_code_image(img, radius, n), bins, bins, false,
            [n = n](std::uint32_t c) { return static_cast<std::uint32_t>(lbp_uniform_bin(c, n)); });
      }
      break;
    case DescriptorKind::kMbLbp:
      for (int s : config.mb_lbp_sides) add(mb_lbp_code_image(img, s), 256, 256, false, identity);
      break;
    case DescriptorKind::kLpq:
      for (int w : config.lpq_windows)
        add(lpq_code_image(img, w, config.lpq_rho), 256, 256, false, identity);
      break;
    case DescriptorKind::kBsif:
      for (const auto& bank : config.bsif_banks)
        add(bsif_code_image(img, *bank), 1 << bank->count, kBsifHistogramSize, true, identity);
      break;
  }
  return out;
}

}  // namespace internal

DescriptorVector describe(const GrayImage& img, const DescriptorConfig& config) {
  const auto hists = internal::code_histograms(img, config);
  DescriptorVector dv;
  dv.kind = config.kind;
  dv.fingerprint = config.fingerprint();
  for (const auto& ch : hists) {
    std::vector<double> h = internal::count_codes(ch, 0, 0, img.height, img.width);
    internal::normalize_l1(h);
    dv.values.insert(dv.values.end(), h.begin(), h.end());
  }
  return dv;
}

std::size_t dense_block_count(int height, int width, int block, int stride) {
  if (block < 1 || stride < 1) throw ConfigError("dense: block and stride must be >= 1");
  if (height < block || width < block) return 0;
  return static_cast<std::size_t>((height - block) / stride + 1) *
         static_cast<std::size_t>((width - block) / stride + 1);
}

std::vector<DescriptorVector> dense_local_descriptors(const GrayImage& img,
                                                      const DescriptorConfig& config,
                                                      int block, int stride) {
  if (block < 1 || stride < 1) throw ConfigError("dense: block and stride must be >= 1");
  if (img.height < block || img.width < block) throw DataError("dense: block larger than image");
  if (block < config.min_side()) throw ConfigError("dense: block smaller than the operator support");
  const auto hists = internal::code_histograms(img, config);
  const std::string fp = config.fingerprint();
  std::vector<DescriptorVector> out;
  out.reserve(dense_block_count(img.height, img.width, block, stride));
  for (int r = 0; r + block <= img.height; r += stride) {
    for (int c = 0; c + block <= img.width; c += stride) {
      DescriptorVector dv;
      dv.kind = config.kind;
      dv.fingerprint = fp;
      for (const auto& ch : hists) {
        std::vector<double> h = internal::count_codes(ch, r, c, block, block);
        internal::normalize_l1(h);
        dv.values.insert(dv.values.end(), h.begin(), h.end());
      }
      out.push_back(std::move(dv));
    }
  }
  return out;
}

}  // namespace spectex
