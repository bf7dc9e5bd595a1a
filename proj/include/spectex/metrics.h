// spectex/metrics.h

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

// Presentation attack detection metrics (APCER, BPCER, DET, D-EER) and the
// tandem detection cost function. A trial is accepted as bona fide iff its
// score is strictly greater than the threshold.

#ifndef SPECTEX_METRICS_H_
#define SPECTEX_METRICS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spectex {

enum class Label { kBonaFide, kAttack };

std::string_view to_string(Label label);  // "bonafide" / "spoof"
Label parse_label(std::string_view token);  // accepts bonafide/bona-fide/genuine, spoof/attack

struct Trial {
  std::string trial_id;
  std::string attack_id = "-";
  Label label = Label::kBonaFide;
  double score = 0.0;
};

struct ScoreSet {
  std::vector<Trial> trials;
};

// Lines "trial_id attack_id label score".
void write_score_file(const std::filesystem::path& path, const ScoreSet& scores);
ScoreSet read_score_file(const std::filesystem::path& path);

struct DetPoint {
  double threshold;
  double apcer;  // attacks with score > threshold
  double bpcer;  // bona fide with score <= threshold
};

// Thresholds: -inf, midpoints between consecutive distinct scores, +inf.
std::vector<DetPoint> det_curve(const ScoreSet& scores);
void write_det_curve(const std::filesystem::path& path, const std::vector<DetPoint>& det);

// APCER = BPCER crossing, linearly interpolated between the bracketing DET
// points.
double compute_eer(const ScoreSet& scores);

// BPCER at the smallest DET threshold whose APCER <= target.
double bpcer_at_apcer(const ScoreSet& scores, double apcer_target);

// ---------------------------------------------------------------- t-DCF

struct TdcfCosts {
  double pi_tar = 0.9405;
  double pi_non = 0.0095;
  double pi_spoof = 0.05;
  double c_miss_asv = 1.0;
  double c_fa_asv = 10.0;
  double c_miss_cm = 1.0;
  double c_fa_cm = 10.0;
};

void validate_costs(const TdcfCosts& costs);

enum class AsvKey { kTarget, kNonTarget, kSpoof };

struct AsvTrial {
  std::string trial_id;
  std::string attack_id = "-";
  AsvKey key = AsvKey::kTarget;
  double score = 0.0;
};

struct AsvScoreSet {
  std::vector<AsvTrial> trials;
};

// Lines "trial_id attack_id key score", key in {target, nontarget, spoof}.
void write_asv_scores(const std::filesystem::path& path, const AsvScoreSet& asv);
AsvScoreSet read_asv_scores(const std::filesystem::path& path);

struct AsvOperatingPoint {
  double threshold = 0.0;
  double p_miss = 0.0;        // targets rejected
  double p_fa = 0.0;          // non-targets accepted
  double p_miss_spoof = 0.0;  // spoofs rejected
};

// ASV threshold at the EER point of target vs non-target scores (the DET
// threshold minimising |P_fa - P_miss|, smallest on ties). Spoof trials are
// restricted to `attack_ids` when any of them match; otherwise all are used.
AsvOperatingPoint asv_operating_point(const AsvScoreSet& asv,
                                      const std::vector<std::string>& attack_ids = {});

struct TdcfConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double norm = 0.0;  // min(c1, c2), or c1 when c2 == 0
};

TdcfConstants tdcf_constants(const TdcfCosts& costs, const AsvOperatingPoint& asv);

// min over CM thresholds of (C1 P_miss_cm + C2 P_fa_cm) / norm.
double min_tdcf(const ScoreSet& cm, const AsvScoreSet& asv, const TdcfCosts& costs = {});

}  // namespace spectex

#endif  // SPECTEX_METRICS_H_
