// spectex/encoding.h

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

// Diagonal-covariance Gaussian mixtures (EM) and Fisher vector encoding.

#ifndef SPECTEX_ENCODING_H_
#define SPECTEX_ENCODING_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace spectex {

using FeatureList = std::vector<std::vector<double>>;

struct GmmModel {
  int num_components = 0;
  int dim = 0;
  std::vector<double> weights;    // K
  std::vector<double> means;      // K x d, row-major
  std::vector<double> variances;  // K x d
  // Per-dimension variance floor used during fitting (empty when the model
  // was loaded from a file).
  std::vector<double> variance_floor;

  const double* mean(int k) const { return means.data() + static_cast<std::size_t>(k) * dim; }
  const double* variance(int k) const {
    return variances.data() + static_cast<std::size_t>(k) * dim;
  }
};

// Checks shapes, positive weights summing to 1 and positive finite variances.
void validate_gmm(const GmmModel& model);

struct GmmOptions {
  int max_iters = 200;
  double tol = 1e-6;           // on the mean log-likelihood
  std::uint64_t seed = 0;
  int kmeans_iters = 5;
  int partitions = 1;          // E-step partitions (one thread each)
  double floor_ratio = 1e-4;   // floor = ratio * global variance
};

struct GmmFitTrace {
  std::vector<double> log_likelihood;  // mean LL before each M-step
  int iterations = 0;
  bool converged = false;
  int reseeds = 0;
};

// EM with k-means++ initialisation. Requires at least 10*K points.
GmmModel gmm_fit(std::span<const std::vector<double>> data, int num_components,
                 const GmmOptions& opts = {}, GmmFitTrace* trace = nullptr);

std::vector<double> gmm_posteriors(const GmmModel& model, std::span<const double> x);

// Mean over frames of log sum_k pi_k N(x; mu_k, sigma_k^2).
double gmm_log_likelihood(const GmmModel& model, std::span<const std::vector<double>> frames);

// File format: "GMM1\n", "K d\n", weights, means, variances (LE doubles).
void write_gmm(const std::filesystem::path& path, const GmmModel& model);
GmmModel read_gmm(const std::filesystem::path& path);

struct FisherOptions {
  bool power_norm = true;
  bool l2_norm = true;
  // Posteriors below this are skipped.
  double posterior_threshold = 1e-8;
};

struct FisherVector {
  std::vector<double> values;  // all G_mu (k-major), then all G_sigma
  bool power_norm = false;
  bool l2_norm = false;
};

FisherVector fisher_vector(const GmmModel& model, std::span<const std::vector<double>> descriptors,
                           const FisherOptions& opts = {});

}  // namespace spectex

#endif  // SPECTEX_ENCODING_H_
