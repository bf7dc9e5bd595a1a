// spectex/fisher.cc

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

#include "spectex/encoding.h"
#include "spectex/error.h"
#include "gmm_internal.h"

namespace spectex {

namespace {

// Neumaier compensated accumulator, keeps the sum nearly independent of the
// order in which terms arrive.
struct CompensatedSum {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

FisherVector fisher_vector(const GmmModel& model, std::span<const std::vector<double>> descriptors,
                           const FisherOptions& opts) {
  if (descriptors.empty()) throw DataError("fisher vector: empty descriptor set");
  const int K = model.num_components, d = model.dim;
  const std::size_t kd = static_cast<std::size_t>(K) * d;
  const internal::GmmEvaluator eval(model);
  std::vector<double> sigma(kd);
  for (std::size_t i = 0; i < kd; ++i) sigma[i] = std::sqrt(model.variances[i]);

  std::vector<CompensatedSum> g_mu(kd), g_sigma(kd);
  std::vector<double> post(K);
  for (const auto& x : descriptors) {
    internal::check_dim(model, x.size());
    for (double v : x)
      if (!std::isfinite(v)) throw DataError("fisher vector: non-finite descriptor value");
    eval.posteriors(x.data(), post.data());
    for (int k = 0; k < K; ++k) {
      const double g = post[k];
      if (g < opts.posterior_threshold) continue;
      const double* mu = model.mean(k);
      const double* sg = sigma.data() + static_cast<std::size_t>(k) * d;
      CompensatedSum* am = g_mu.data() + static_cast<std::size_t>(k) * d;
      CompensatedSum* as = g_sigma.data() + static_cast<std::size_t>(k) * d;
      for (int j = 0; j < d; ++j) {
        const double z = (x[j] - mu[j]) / sg[j];
        am[j].add(g * z);
        as[j].add(g * (z * z - 1.0));
      }
    }
  }

  FisherVector fv;
  fv.power_norm = opts.power_norm;
  fv.l2_norm = opts.l2_norm;
  fv.values.resize(2 * kd);
  const double T = static_cast<double>(descriptors.size());
  for (int k = 0; k < K; ++k) {
    const double scale_mu = 1.0 / (T * std::sqrt(model.weights[k]));
    const double scale_sigma = 1.0 / (T * std::sqrt(2.0 * model.weights[k]));
    for (int j = 0; j < d; ++j) {
      const std::size_t i = static_cast<std::size_t>(k) * d + j;
      fv.values[i] = scale_mu * g_mu[i].value();
      fv.values[kd + i] = scale_sigma * g_sigma[i].value();
    }
  }
  if (opts.power_norm)
    for (double& v : fv.values) v = std::copysign(std::sqrt(std::abs(v)), v);
  if (opts.l2_norm) {
    double norm = 0.0;
    for (double v : fv.values) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : fv.values) v /= norm;
  }
  for (double v : fv.values)
    if (!std::isfinite(v)) throw NumericError("fisher vector: non-finite component");
  return fv;
}

}  // namespace spectex
