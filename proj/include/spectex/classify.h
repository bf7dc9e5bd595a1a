// spectex/classify.h

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

// Linear SVM (L1 hinge loss, dual coordinate descent) and the two-GMM
// log-likelihood-ratio baseline. Scores: higher means more bona fide.

#ifndef SPECTEX_CLASSIFY_H_
#define SPECTEX_CLASSIFY_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "spectex/encoding.h"

namespace spectex {

struct SvmOptions {
  double C = 1.0;
  int max_epochs = 1000;
  std::uint64_t seed = 0;
  // C_i = C * n / (2 n_{y_i}) when set.
  bool class_balanced = true;
  bool standardize = true;
  // Stop when primal - dual < gap_tol * primal.
  double gap_tol = 1e-3;
};

// The model works on standardised features z = (x - mean) / scale. The bias
// is learned as the weight of a constant feature equal to 1, so the objective
// is (1/2)(|w|^2 + b^2) + sum_i C_i max(0, 1 - y_i (w.z_i + b)).
struct SvmModel {
  std::size_t dim = 0;
  std::vector<double> mean;   // dim
  std::vector<double> scale;  // dim, all > 0
  std::vector<double> w;      // dim, in standardised space
  double b = 0.0;
  double C = 1.0;

  // Equivalent affine function on raw features.
  std::vector<double> effective_weights() const;
  double effective_bias() const;
};

struct SvmTrainInfo {
  int epochs = 0;
  double primal = 0.0;
  double dual = 0.0;
  bool converged = false;
};

// Labels: +1 bona fide, -1 attack.
SvmModel svm_train(std::span<const std::vector<double>> X, std::span<const int> y,
                   const SvmOptions& opts = {}, SvmTrainInfo* info = nullptr);

double svm_score(const SvmModel& model, std::span<const double> x);
std::vector<double> svm_score_batch(const SvmModel& model, std::span<const std::vector<double>> X);

// File format: "LSVM1\n", "dim\n", mean, scale, w, then b (LE doubles). C is
// not stored and reads back as 0.
void write_svm(const std::filesystem::path& path, const SvmModel& model);
SvmModel read_svm(const std::filesystem::path& path);

// gmm_log_likelihood(bona) - gmm_log_likelihood(attack) over per-frame vectors.
double gmm_llr_score(const GmmModel& bona_model, const GmmModel& attack_model,
                     std::span<const std::vector<double>> frames);

}  // namespace spectex

#endif  // SPECTEX_CLASSIFY_H_
