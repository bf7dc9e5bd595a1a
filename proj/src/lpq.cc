// spectex/lpq.cc

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
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "spectex/error.h"
#include "spectex/texture.h"
#include "texture_internal.h"

namespace spectex {

namespace {

void check_lpq_params(int window, double rho) {
  if (window < 3 || window % 2 == 0) throw ConfigError("lpq: window must be odd and >= 3");
  if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("lpq: rho must be in [0, 1)");
}

// 8 x window^2 real kernels, rows [Re u0..u3, Im u0..u3].
std::vector<double> lpq_kernels(int window) {
  const int r = window / 2;
  const double a = 1.0 / window;
  const double freqs[4][2] = {{a, 0.0}, {0.0, a}, {a, a}, {a, -a}};  // (horizontal, vertical)
  const std::size_t n = static_cast<std::size_t>(window) * window;
  std::vector<double> k(8 * n);
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const std::size_t p = static_cast<std::size_t>(dy + r) * window + (dx + r);
      for (int f = 0; f < 4; ++f) {
        const double theta = 2.0 * std::numbers::pi * (freqs[f][0] * dx + freqs[f][1] * dy);
        k[f * n + p] = std::cos(theta);
        k[(4 + f) * n + p] = -std::sin(theta);
      }
    }
  }
  return k;
}

}  // namespace

std::array<double, 64> lpq_whitening_matrix(int window, double rho) {
  check_lpq_params(window, rho);
  std::array<double, 64> out{};
  if (rho == 0.0) {
    for (int i = 0; i < 8; ++i) out[i * 8 + i] = 1.0;
    return out;
  }
  const int r = window / 2;
  const int n = window * window;
  Eigen::MatrixXd corr(n, n);
  for (int p = 0; p < n; ++p) {
    const int py = p / window - r, px = p % window - r;
    for (int q = 0; q < n; ++q) {
      const int qy = q / window - r, qx = q % window - r;
      const double d = std::hypot(static_cast<double>(px - qx), static_cast<double>(py - qy));
      corr(p, q) = std::pow(rho, d);
    }
  }
  const std::vector<double> k = lpq_kernels(window);
  Eigen::MatrixXd m(8, n);
  for (int i = 0; i < 8; ++i)
    for (int p = 0; p < n; ++p) m(i, p) = k[static_cast<std::size_t>(i) * n + p];
  Eigen::Matrix<double, 8, 8> cov = m * corr * m.transpose();
  // Near-unit diagonal scaling separates the pairs of equal eigenvalues that
  // the symmetric covariance model produces, so the basis is well defined.
  Eigen::Matrix<double, 8, 1> bump;
  bump << 1.000007, 1.000006, 1.000005, 1.000004, 1.000003, 1.000002, 1.000001, 1.0;
  cov = bump.asDiagonal() * cov * bump.asDiagonal();
  cov = 0.5 * (cov + cov.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 8, 8>> es(cov);
  if (es.info() != Eigen::Success) throw NumericError("lpq: eigendecomposition failed");
  std::array<int, 8> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return es.eigenvalues()(x) > es.eigenvalues()(y);
  });
  for (int row = 0; row < 8; ++row) {
    Eigen::Matrix<double, 8, 1> v = es.eigenvectors().col(order[row]);
    int big = 0;
    for (int i = 1; i < 8; ++i)
      if (std::abs(v(i)) > std::abs(v(big))) big = i;
    if (v(big) < 0) v = -v;
    for (int i = 0; i < 8; ++i) out[row * 8 + i] = v(i);
  }
  return out;
}

CodeImage lpq_code_image(const GrayImage& img, int window, double rho) {
  check_lpq_params(window, rho);
  if (img.height < window || img.width < window)
    throw DataError("lpq: image smaller than the window");
  const std::vector<double> k = lpq_kernels(window);
  const std::array<double, 64> white = lpq_whitening_matrix(window, rho);
  const bool whiten = rho > 0.0;
  const int r = window / 2;
  const std::size_t n = static_cast<std::size_t>(window) * window;

  CodeImage out;
  out.rows = img.height - window + 1;
  out.cols = img.width - window + 1;
  out.support = window;
  out.codes.resize(static_cast<std::size_t>(out.rows) * out.cols);
  std::vector<double> patch(n);
  for (int y = 0; y < out.rows; ++y) {
    for (int x = 0; x < out.cols; ++x) {
      // Differences from the centre: the kernels sum to zero, so this leaves
      // the responses unchanged and makes flat patches respond exactly 0.
      const double center = img.at(y + r, x + r);
      for (int dy = 0; dy < window; ++dy)
        for (int dx = 0; dx < window; ++dx)
          patch[static_cast<std::size_t>(dy) * window + dx] = img.at(y + dy, x + dx) - center;
      double f[8];
      for (int i = 0; i < 8; ++i) {
        const double* ki = k.data() + i * n;
        double acc = 0.0;
        for (std::size_t p = 0; p < n; ++p) acc += ki[p] * patch[p];
        f[i] = acc;
      }
      std::uint32_t code = 0;
      for (int i = 0; i < 8; ++i) {
        double g = f[i];
        if (whiten) {
          g = 0.0;
          for (int j = 0; j < 8; ++j) g += white[i * 8 + j] * f[j];
        }
        if (g > internal::kResponseTolerance) code |= (1u << i);
      }
      out.codes[static_cast<std::size_t>(y) * out.cols + x] = code;
    }
  }
  return out;
}

DescriptorVector lpq_histogram(const GrayImage& img, int window, double rho) {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::kLpq;
  cfg.lpq_windows = {window};
  cfg.lpq_rho = rho;
  return describe(img, cfg);
}

}  // namespace spectex
