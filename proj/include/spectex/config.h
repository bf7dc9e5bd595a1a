// spectex/config.h

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

// Experiment configuration: an INI file of "key = value" lines grouped under
// [section] headers. Relative paths are resolved against the directory of
// the configuration file. See README.md for the full key list.

#ifndef SPECTEX_CONFIG_H_
#define SPECTEX_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "spectex/classify.h"
#include "spectex/encoding.h"
#include "spectex/metrics.h"
#include "spectex/protocol.h"
#include "spectex/synth.h"
#include "spectex/texture.h"
#include "spectex/timefreq.h"

namespace spectex {

struct PathsConfig {
  std::filesystem::path audio_dir;
  std::string audio_extension = ".wav";
  std::filesystem::path train_protocol;
  std::filesystem::path eval_protocol;
  std::filesystem::path asv_scores;  // optional; enables min t-DCF
  std::filesystem::path cache_dir;
  std::filesystem::path output_dir;
  ProtocolFormat protocol_format = ProtocolFormat::kNative;
  Scenario scenario = Scenario::kLogical;
  Asvspoof2019Columns columns;
};

struct TransformConfig {
  TransformKind kind = TransformKind::kCqt;
  StftParams stft;
  LfccParams lfcc;
  CqtParams cqt;
  int cqcc_coeffs = 20;
  double dynamic_range_db = 80.0;
};

enum class EncodingMode { kFisher, kGlobal };

struct DescriptorSettings {
  DescriptorKind kind = DescriptorKind::kBsif;
  std::vector<std::pair<int, int>> lbp_scales = default_lbp_scales();
  std::vector<int> mb_lbp_sides{3};
  std::vector<int> lpq_windows{7};
  double lpq_rho = 0.9;
  // Each entry is "LxN" (bundled default bank) or a bank file path.
  std::vector<std::string> bsif_banks{"7x8"};
  // kFisher: dense blocks -> GMM -> Fisher vector. kGlobal: one histogram
  // per image fed straight to the classifier.
  EncodingMode encoding = EncodingMode::kFisher;
  int block = 64;
  int stride = 32;
};

struct FisherConfig {
  int components = 512;
  bool power_norm = true;
  bool l2_norm = true;
  int gmm_max_iters = 200;
  double gmm_tol = 1e-6;
  int partitions = 1;
  std::size_t max_gmm_vectors = 0;  // 0: use every training descriptor
};

enum class ClassifierKind { kSvm, kGmmLlr };

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::kSvm;
  double C = 1.0;
  int max_epochs = 1000;
  bool class_balanced = true;
  bool standardize = true;
  int gmm_components = 512;  // per class, gmm_llr only
};

struct LearnBsifConfig {
  std::filesystem::path output_dir;
  std::vector<int> sides{3, 5, 7, 9, 11, 13, 15, 17};
  std::vector<int> counts{5, 6, 7, 8, 9, 10, 11, 12};
};

struct ExperimentConfig {
  PathsConfig paths;
  TransformConfig transform;
  DescriptorSettings descriptor;
  FisherConfig fisher;
  ClassifierConfig classifier;
  TdcfCosts tdcf;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::filesystem::path synth_output_dir;
  SynthCorpusOptions synth;
  LearnBsifConfig learn_bsif;

  // Canonical INI text with every key; parse(serialize()) reproduces it.
  std::string serialize() const;
  bool operator==(const ExperimentConfig& o) const { return serialize() == o.serialize(); }
};

// Throws ConfigError on syntax errors, unknown sections or keys, and bad values.
ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Resolves DescriptorSettings into a DescriptorConfig (loads or learns banks).
DescriptorConfig resolve_descriptor(const DescriptorSettings& s);

// Sanity checks that do not touch the file system.
void validate_config(const ExperimentConfig& cfg);

}  // namespace spectex

#endif  // SPECTEX_CONFIG_H_
