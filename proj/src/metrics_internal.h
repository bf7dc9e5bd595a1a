// spectex/metrics_internal.h

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

#ifndef SPECTEX_METRICS_INTERNAL_H_
#define SPECTEX_METRICS_INTERNAL_H_

#include <string>
#include <string_view>
#include <vector>

#include "spectex/metrics.h"

namespace spectex::internal {

double parse_score(std::string_view tok, const std::string& where);
std::string format_score(double v);

std::vector<double> det_thresholds(std::vector<double> all);

// DET over a positive and a negative score list: `bpcer` is the fraction of
// positives with score <= tau, `apcer` the fraction of negatives above it.
std::vector<DetPoint> two_class_det(std::vector<double> pos, std::vector<double> neg);

}  // namespace spectex::internal

#endif  // SPECTEX_METRICS_INTERNAL_H_
