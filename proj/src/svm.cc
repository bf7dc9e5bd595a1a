// spectex/svm.cc

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
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "spectex/binary_io.h"
#include "spectex/classify.h"
#include "spectex/error.h"

namespace spectex {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<double> SvmModel::effective_weights() const {
  std::vector<double> out(dim);
  for (std::size_t j = 0; j < dim; ++j) out[j] = w[j] / scale[j];
  return out;
}

double SvmModel::effective_bias() const {
  double s = b;
  for (std::size_t j = 0; j < dim; ++j) s -= w[j] * mean[j] / scale[j];
  return s;
}

SvmModel svm_train(std::span<const std::vector<double>> X, std::span<const int> y,
                   const SvmOptions& opts, SvmTrainInfo* info) {
  if (!(opts.C > 0.0) || !std::isfinite(opts.C)) throw ConfigError("svm: C must be positive");
  if (opts.max_epochs < 1) throw ConfigError("svm: max_epochs must be >= 1");
  if (X.empty() || X.size() != y.size()) throw DataError("svm: features and labels differ in count");
  const std::size_t n = X.size(), d = X[0].size();
  if (d == 0) throw DataError("svm: zero-dimensional features");
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != 1 && y[i] != -1) throw DataError("svm: labels must be +1 or -1");
    if (X[i].size() != d) throw DataError("svm: inconsistent feature dimensions");
    for (double v : X[i])
      if (!std::isfinite(v)) throw DataError("svm: non-finite feature value");
    if (y[i] == 1) ++n_pos;
  }
  if (n_pos == 0 || n_pos == n) throw DataError("svm: training data must contain both classes");

  SvmModel model;
  model.dim = d;
  model.C = opts.C;
  model.mean.assign(d, 0.0);
  model.scale.assign(d, 1.0);
  if (opts.standardize) {
    for (const auto& x : X)
      for (std::size_t j = 0; j < d; ++j) model.mean[j] += x[j];
    for (double& m : model.mean) m /= static_cast<double>(n);
    std::vector<double> var(d, 0.0);
    for (const auto& x : X)
      for (std::size_t j = 0; j < d; ++j) var[j] += (x[j] - model.mean[j]) * (x[j] - model.mean[j]);
    for (std::size_t j = 0; j < d; ++j) {
      const double s = std::sqrt(var[j] / static_cast<double>(n));
      model.scale[j] = s > 1e-12 ? s : 1.0;
    }
  }

  // Standardised samples with the constant bias feature appended.
  const std::size_t D = d + 1;
  std::vector<double> z(n * D);
  std::vector<double> qii(n), upper(n);
  const double c_pos = opts.class_balanced ? opts.C * n / (2.0 * n_pos) : opts.C;
  const double c_neg = opts.class_balanced ? opts.C * n / (2.0 * (n - n_pos)) : opts.C;
  for (std::size_t i = 0; i < n; ++i) {
    double* zi = z.data() + i * D;
    for (std::size_t j = 0; j < d; ++j) zi[j] = (X[i][j] - model.mean[j]) / model.scale[j];
    zi[d] = 1.0;
    qii[i] = dot(zi, zi, D);
    upper[i] = y[i] == 1 ? c_pos : c_neg;
  }

  std::vector<double> w(D, 0.0), alpha(n, 0.0);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);
  std::mt19937_64 rng(opts.seed);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double pg_max_old = kInf, pg_min_old = -kInf;
  SvmTrainInfo local;
  SvmTrainInfo& inf = info ? *info : local;
  inf = SvmTrainInfo{};

  for (int epoch = 1; epoch <= opts.max_epochs; ++epoch) {
    inf.epochs = epoch;
    std::shuffle(active.begin(), active.end(), rng);
    double pg_max = -kInf, pg_min = kInf;
    std::size_t s = 0;
    while (s < active.size()) {
      const std::size_t i = active[s];
      const double* zi = z.data() + i * D;
      const double g = y[i] * dot(w.data(), zi, D) - 1.0;
      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (g > pg_max_old) {  // shrink: stays at the lower bound
          active[s] = active.back();
          active.pop_back();
          continue;
        }
        if (g < 0.0) pg = g;
      } else if (alpha[i] == upper[i]) {
        if (g < pg_min_old) {
          active[s] = active.back();
          active.pop_back();
          continue;
        }
        if (g > 0.0) pg = g;
      } else {
        pg = g;
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::min(std::max(old - g / qii[i], 0.0), upper[i]);
        const double step = (alpha[i] - old) * y[i];
        for (std::size_t j = 0; j < D; ++j) w[j] += step * zi[j];
      }
      ++s;
    }

    const double half_w2 = 0.5 * dot(w.data(), w.data(), D);
    double hinge = 0.0, alpha_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      hinge += upper[i] * std::max(0.0, 1.0 - y[i] * dot(w.data(), z.data() + i * D, D));
      alpha_sum += alpha[i];
    }
    inf.primal = half_w2 + hinge;
    inf.dual = alpha_sum - half_w2;
    if (inf.primal - inf.dual <= opts.gap_tol * inf.primal) {
      inf.converged = true;
      break;
    }
    if (pg_max - pg_min <= 1e-12 || active.empty()) {
      // The shrunk problem is solved but the full one is not: start over
      // from the complete index set.
      active.resize(n);
      std::iota(active.begin(), active.end(), 0);
      pg_max_old = kInf;
      pg_min_old = -kInf;
      continue;
    }
    pg_max_old = pg_max <= 0.0 ? kInf : pg_max;
    pg_min_old = pg_min >= 0.0 ? -kInf : pg_min;
  }

  model.w.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
  model.b = w[d];
  return model;
}

double svm_score(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.dim)
    throw DataError("svm: feature dimension " + std::to_string(x.size()) + " does not match model " +
                    std::to_string(model.dim));
  double s = model.b;
  for (std::size_t j = 0; j < model.dim; ++j) s += model.w[j] * ((x[j] - model.mean[j]) / model.scale[j]);
  return s;
}

std::vector<double> svm_score_batch(const SvmModel& model, std::span<const std::vector<double>> X) {
  std::vector<double> out;
  out.reserve(X.size());
  for (const auto& x : X) out.push_back(svm_score(model, x));
  return out;
}

void write_svm(const std::filesystem::path& path, const SvmModel& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  os << "LSVM1\n" << model.dim << '\n';
  write_f64_le(os, model.mean);
  write_f64_le(os, model.scale);
  write_f64_le(os, model.w);
  const double b = model.b;
  write_f64_le(os, std::span<const double>(&b, 1));
  if (!os) throw DataError("write failed: " + path.string());
}

SvmModel read_svm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  expect_magic(is, "LSVM1\n", "svm model");
  const auto hdr = read_header_ints(is, 1, "svm model");
  if (hdr[0] == 0 || hdr[0] > (1ull << 28)) throw DataError("svm model: bad dimension");
  SvmModel m;
  m.dim = hdr[0];
  m.mean = read_f64_le(is, m.dim, "svm mean");
  m.scale = read_f64_le(is, m.dim, "svm scale");
  m.w = read_f64_le(is, m.dim, "svm weights");
  m.b = read_f64_le(is, 1, "svm bias")[0];
  m.C = 0.0;  // not stored
  if (!at_eof(is)) throw DataError("svm model: trailing bytes");
  for (std::size_t j = 0; j < m.dim; ++j)
    if (!(m.scale[j] > 0.0) || !std::isfinite(m.mean[j]) || !std::isfinite(m.w[j]))
      throw DataError("svm model: invalid parameters");
  if (!std::isfinite(m.b)) throw DataError("svm model: invalid bias");
  return m;
}

double gmm_llr_score(const GmmModel& bona_model, const GmmModel& attack_model,
                     std::span<const std::vector<double>> frames) {
  if (bona_model.dim != attack_model.dim) throw DataError("llr: model dimensions differ");
  return gmm_log_likelihood(bona_model, frames) - gmm_log_likelihood(attack_model, frames);
}

}  // namespace spectex
