// spectex/bsif.cc

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

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <random>

#include <Eigen/Dense>

#include "spectex/binary_io.h"
#include "spectex/error.h"
#include "spectex/synth.h"
#include "spectex/texture.h"
#include "texture_internal.h"

namespace spectex {

namespace {

constexpr std::string_view kBankMagic = "BSIF1\n";

void check_bank_shape(int side, int count) {
  if (side < 1 || side % 2 == 0) throw DataError("bsif: filter side must be odd");
  if (count < 1 || count > 16) throw DataError("bsif: filter count must be in [1, 16]");
}

// Symmetric decorrelation W <- (W W^T)^(-1/2) W.
Eigen::MatrixXd sym_decorrelate(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w * w.transpose());
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose() * w;
}

}  // namespace

FilterBank validate_filter_bank(FilterBank bank) {
  check_bank_shape(bank.side, bank.count);
  const std::size_t n = static_cast<std::size_t>(bank.side) * bank.side;
  if (bank.taps.size() != n * bank.count) throw DataError("bsif: tap count does not match l*l*N");
  for (int i = 0; i < bank.count; ++i) {
    double* f = bank.taps.data() + n * i;
    double mean = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (!std::isfinite(f[p])) throw DataError("bsif: non-finite filter tap");
      mean += f[p];
    }
    mean /= static_cast<double>(n);
    if (std::abs(mean) > 1e-4)
      throw DataError("bsif: filter " + std::to_string(i) + " is not zero-mean");
    // Rounding-level offsets are kept so that saved banks load bit-exactly.
    if (std::abs(mean) > 1e-12)
      for (std::size_t p = 0; p < n; ++p) f[p] -= mean;
  }
  return bank;
}

FilterBank load_filter_bank(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open filter bank " + path.string());
  expect_magic(is, kBankMagic, "filter bank");
  const std::vector<std::uint64_t> hdr = read_header_ints(is, 2, "filter bank");
  if (hdr[0] > 1024 || hdr[1] > 1024) throw DataError("filter bank: header out of range");
  FilterBank bank;
  bank.side = static_cast<int>(hdr[0]);
  bank.count = static_cast<int>(hdr[1]);
  check_bank_shape(bank.side, bank.count);
  bank.taps = read_f64_le(is, static_cast<std::size_t>(bank.side) * bank.side * bank.count,
                          "filter bank");
  if (!at_eof(is)) throw DataError("filter bank: trailing bytes");
  return validate_filter_bank(std::move(bank));
}

void write_filter_bank(const std::filesystem::path& path, const FilterBank& bank) {
  check_bank_shape(bank.side, bank.count);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write filter bank " + path.string());
  os << kBankMagic << bank.side << ' ' << bank.count << '\n';
  write_f64_le(os, bank.taps);
  if (!os) throw DataError("write failed: " + path.string());
}

FilterBank learn_filters_ica(std::span<const std::vector<double>> patches, int side,
                             int count, std::uint64_t seed, const IcaOptions& opts) {
  if (side < 1 || side % 2 == 0) throw ConfigError("ica: side must be odd");
  const int d = side * side;
  if (count < 1 || count > 16 || count > d - 1)
    throw ConfigError("ica: need 1 <= N <= min(16, l*l - 1)");
  const std::size_t n = patches.size();
  if (n < static_cast<std::size_t>(50) * d) throw ConfigError("ica: need at least 50*l*l patches");

  Eigen::MatrixXd x(d, static_cast<Eigen::Index>(n));  // one patch per column
  for (std::size_t t = 0; t < n; ++t) {
    if (patches[t].size() != static_cast<std::size_t>(d))
      throw DataError("ica: patch size does not match l*l");
    double dc = 0.0;
    for (double v : patches[t]) dc += v;
    dc /= d;
    for (int p = 0; p < d; ++p) x(p, static_cast<Eigen::Index>(t)) = patches[t][p] - dc;
  }
  x.colwise() -= x.rowwise().mean();

  const Eigen::MatrixXd cov = (x * x.transpose()) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pca(cov);
  if (pca.info() != Eigen::Success) throw NumericError("ica: PCA failed");
  // Eigen sorts ascending; take the top `count` from the end.
  const Eigen::VectorXd& lam = pca.eigenvalues();
  const double top = lam(d - 1);
  if (!(top > 0.0) || lam(d - count) <= 1e-10 * top)
    throw NumericError("ica: patch data rank is below the filter count");
  Eigen::MatrixXd whiten(count, d);
  for (int i = 0; i < count; ++i)
    whiten.row(i) = pca.eigenvectors().col(d - 1 - i).transpose() / std::sqrt(lam(d - 1 - i));
  const Eigen::MatrixXd z = whiten * x;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd w(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) w(i, j) = normal(rng);
  w = sym_decorrelate(w);

  bool converged = false;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const Eigen::MatrixXd g = (w * z).array().tanh().matrix();
    const Eigen::VectorXd g_prime_mean =
        (1.0 - g.array().square()).matrix().rowwise().mean();
    Eigen::MatrixXd w_new =
        (g * z.transpose()) / static_cast<double>(n) - g_prime_mean.asDiagonal() * w;
    w_new = sym_decorrelate(w_new);
    const double change =
        (1.0 - (w_new.array() * w.array()).rowwise().sum().abs()).abs().maxCoeff();
    w = w_new;
    if (change < opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericError("ica: FastICA did not converge");

  const Eigen::MatrixXd filters = w * whiten;  // count x d
  FilterBank bank;
  bank.side = side;
  bank.count = count;
  bank.taps.resize(static_cast<std::size_t>(count) * d);
  for (int i = 0; i < count; ++i) {
    Eigen::Index big = 0;
    filters.row(i).cwiseAbs().maxCoeff(&big);
    const double sign = filters(i, big) < 0.0 ? -1.0 : 1.0;
    for (int p = 0; p < d; ++p)
      bank.taps[static_cast<std::size_t>(i) * d + p] = sign * filters(i, p);
  }
  return validate_filter_bank(std::move(bank));
}

std::shared_ptr<const FilterBank> default_filter_bank(int side, int count) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const FilterBank>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({side, count});
  if (it != cache.end()) return it->second;
  if (side < 3 || side % 2 == 0) throw ConfigError("bsif: default banks need odd l >= 3");
  const std::uint64_t tag = static_cast<std::uint64_t>(side) * 100 + count;
  const auto patches = natural_patches(side, static_cast<std::size_t>(60) * side * side,
                                       0x5eed0000ULL + tag);
  auto bank = std::make_shared<const FilterBank>(
      learn_filters_ica(patches, side, count, 0x1ca00000ULL + tag));
  cache.emplace(std::make_pair(side, count), bank);
  return bank;
}

CodeImage bsif_code_image(const GrayImage& img, const FilterBank& bank) {
  check_bank_shape(bank.side, bank.count);
  const int l = bank.side;
  if (img.height < l || img.width < l) throw DataError("bsif: image smaller than the filters");
  const std::size_t n = static_cast<std::size_t>(l) * l;
  const int r = l / 2;
  CodeImage out;
  out.rows = img.height - l + 1;
  out.cols = img.width - l + 1;
  out.support = l;
  out.codes.assign(static_cast<std::size_t>(out.rows) * out.cols, 0);
  std::vector<double> patch(n);
  for (int y = 0; y < out.rows; ++y) {
    for (int x = 0; x < out.cols; ++x) {
      // Centre-referenced patch: same response for zero-mean filters, and
      // exactly zero on flat regions.
      const double center = img.at(y + r, x + r);
      for (int dy = 0; dy < l; ++dy) {
        const std::uint8_t* row = &img.pixels[static_cast<std::size_t>(y + dy) * img.width + x];
        for (int dx = 0; dx < l; ++dx) patch[static_cast<std::size_t>(dy) * l + dx] = row[dx] - center;
      }
      std::uint32_t code = 0;
      for (int i = 0; i < bank.count; ++i) {
        const double* f = bank.taps.data() + n * i;
        double acc = 0.0;
        for (std::size_t p = 0; p < n; ++p) acc += f[p] * patch[p];
        if (acc > internal::kResponseTolerance) code |= (1u << i);
      }
      out.codes[static_cast<std::size_t>(y) * out.cols + x] = code;
    }
  }
  return out;
}

DescriptorVector bsif_histogram(const GrayImage& img, const FilterBank& bank) {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::kBsif;
  cfg.bsif_banks = {std::make_shared<const FilterBank>(bank)};
  return describe(img, cfg);
}

namespace internal {

std::vector<double> fold_bsif_bins(const std::vector<double>& raw) {
  std::vector<double> out(kBsifHistogramSize, 0.0);
  if (raw.size() <= out.size()) {
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
  }
  const std::size_t group = raw.size() / out.size();
  for (std::size_t i = 0; i < raw.size(); ++i) out[i / group] += raw[i];
  return out;
}

}  // namespace internal

}  // namespace spectex
