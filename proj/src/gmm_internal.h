// spectex/gmm_internal.h

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

#ifndef SPECTEX_GMM_INTERNAL_H_
#define SPECTEX_GMM_INTERNAL_H_

#include <span>
#include <vector>

#include "spectex/encoding.h"

namespace spectex::internal {

// Cached per-component constants for log-density evaluation.
class GmmEvaluator {
 public:
  explicit GmmEvaluator(const GmmModel& model);

  // out[k] = log pi_k + log N(x; mu_k, sigma_k^2).
  void log_joint(const double* x, double* out) const;

  // Fills `post` with normalised posteriors; returns log sum_k of the joint.
  double posteriors(const double* x, double* post) const;

  const GmmModel& model() const { return model_; }

 private:
  const GmmModel& model_;
  std::vector<double> inv_var_;  // K x d
  std::vector<double> offset_;   // K: log pi_k - 0.5 sum log(2 pi sigma^2)
};

void check_dim(const GmmModel& model, std::size_t d);

}  // namespace spectex::internal

#endif  // SPECTEX_GMM_INTERNAL_H_
