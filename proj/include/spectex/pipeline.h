// spectex/pipeline.h

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

// Staged experiment runner:
//
//   extract -> gmm-train -> fv-encode -> svm-train -> score -> evaluate -> report
//
// The first four stages cache their outputs under
// <cache_dir>/<stage>-<fingerprint>/, where the fingerprint hashes every
// setting the stage depends on, including its upstream fingerprint. A stage
// whose output directory is complete is reused. score, evaluate and report
// are cheap and always rewrite <output_dir>.

#ifndef SPECTEX_PIPELINE_H_
#define SPECTEX_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spectex/config.h"
#include "spectex/feature_cache.h"

namespace spectex {

enum class Stage { kExtract, kGmmTrain, kFvEncode, kSvmTrain, kScore, kEvaluate, kReport };

std::string_view to_string(Stage s);  // "extract", "gmm-train", ...
Stage parse_stage(std::string_view name);

// Seed for one stage: FNV-1a of "<stage>:<master seed>".
std::uint64_t stage_seed(std::uint64_t master, std::string_view stage);

// Per-trial features for the configured front end: dense block descriptors
// (fisher encoding), a single global descriptor (global encoding), or, for
// the gmm_llr classifier, the per-frame columns of the transform matrix.
FeatureMatrix extract_features(const ExperimentConfig& cfg, const DescriptorConfig& desc,
                               const AudioClip& clip);

// The time-frequency matrix selected by the transform settings.
TimeFreqMatrix compute_transform(const TransformConfig& t, const AudioClip& clip);

struct StageRecord {
  std::string name;
  std::string fingerprint;  // empty for the uncached stages
  bool cached = false;
  std::size_t computed = 0;  // extract: trials computed in this run
  std::size_t reused = 0;    // extract: trials taken from the cache
  double seconds = 0.0;
};

struct MetricSummary {
  double d_eer = 0.0;
  double bpcer10 = 0.0;
  double bpcer20 = 0.0;
  double bpcer100 = 0.0;
  std::optional<double> min_tdcf;
};

struct RunResult {
  std::vector<StageRecord> stages;
  std::optional<MetricSummary> metrics;
  std::optional<PaiReport> report;
};

// Runs every stage up to and including `last`. Errors keep their type and
// are prefixed with the stage name (and trial id where one is involved).
RunResult run_experiment(const ExperimentConfig& cfg, Stage last = Stage::kReport);

// Generates the synthetic corpus described by cfg.synth into
// cfg.synth_output_dir.
void run_synth_data(const ExperimentConfig& cfg);

// Learns a bank for every valid (side, count) of cfg.learn_bsif and writes
// <output_dir>/bsif_<l>x<N>.bank. Returns the number written.
int run_learn_bsif(const ExperimentConfig& cfg);

}  // namespace spectex

#endif  // SPECTEX_PIPELINE_H_
