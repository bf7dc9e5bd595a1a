// spectex/tdcf.cc

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
#include <set>
#include <sstream>

#include "spectex/error.h"
#include "spectex/metrics.h"
#include "metrics_internal.h"

namespace spectex {

namespace {

std::string_view key_name(AsvKey k) {
  switch (k) {
    case AsvKey::kTarget: return "target";
    case AsvKey::kNonTarget: return "nontarget";
    case AsvKey::kSpoof: return "spoof";
  }
  return "?";
}

AsvKey parse_key(std::string_view t, const std::string& where) {
  if (t == "target") return AsvKey::kTarget;
  if (t == "nontarget" || t == "non-target") return AsvKey::kNonTarget;
  if (t == "spoof") return AsvKey::kSpoof;
  throw DataError(where + ": unknown ASV key '" + std::string(t) + "'");
}

}  // namespace

void validate_costs(const TdcfCosts& c) {
  const double priors[] = {c.pi_tar, c.pi_non, c.pi_spoof};
  for (double p : priors)
    if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("t-DCF: priors must be >= 0");
  if (std::abs(c.pi_tar + c.pi_non + c.pi_spoof - 1.0) > 1e-9)
    throw ConfigError("t-DCF: priors must sum to 1");
  const double costs[] = {c.c_miss_asv, c.c_fa_asv, c.c_miss_cm, c.c_fa_cm};
  for (double v : costs)
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("t-DCF: costs must be > 0");
}

void write_asv_scores(const std::filesystem::path& path, const AsvScoreSet& asv) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  for (const AsvTrial& t : asv.trials)
    os << t.trial_id << ' ' << t.attack_id << ' ' << key_name(t.key) << ' '
       << internal::format_score(t.score) << '\n';
  if (!os) throw DataError("write failed: " + path.string());
}

AsvScoreSet read_asv_scores(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  AsvScoreSet out;
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    std::istringstream ls(line);
    std::string id, attack, key, score, extra;
    if (!(ls >> id)) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (!(ls >> attack >> key >> score) || (ls >> extra))
      throw DataError(where + ": expected 'trial_id attack_id key score'");
    out.trials.push_back({id, attack, parse_key(key, where), internal::parse_score(score, where)});
  }
  return out;
}

AsvOperatingPoint asv_operating_point(const AsvScoreSet& asv,
                                      const std::vector<std::string>& attack_ids) {
  std::vector<double> tar, non, spoof_all, spoof_sel;
  const std::set<std::string> wanted(attack_ids.begin(), attack_ids.end());
  for (const AsvTrial& t : asv.trials) {
    switch (t.key) {
      case AsvKey::kTarget: tar.push_back(t.score); break;
      case AsvKey::kNonTarget: non.push_back(t.score); break;
      case AsvKey::kSpoof:
        spoof_all.push_back(t.score);
        if (wanted.count(t.attack_id)) spoof_sel.push_back(t.score);
        break;
    }
  }
  if (tar.empty() || non.empty() || spoof_all.empty())
    throw DataError("t-DCF: ASV scores must cover target, non-target and spoof trials");
  const auto [lo, hi] = std::minmax_element(tar.begin(), tar.end());
  const auto [nlo, nhi] = std::minmax_element(non.begin(), non.end());
  if (*lo == *hi && *nlo == *nhi && *lo == *nlo)
    throw DataError("t-DCF: degenerate ASV scores (all identical)");
  const std::vector<double>& spoof = spoof_sel.empty() ? spoof_all : spoof_sel;

  const std::vector<DetPoint> det = internal::two_class_det(tar, non);
  std::size_t best = 0;
  for (std::size_t i = 1; i < det.size(); ++i)
    if (std::abs(det[i].apcer - det[i].bpcer) < std::abs(det[best].apcer - det[best].bpcer)) best = i;
  AsvOperatingPoint op;
  op.threshold = det[best].threshold;
  op.p_miss = det[best].bpcer;
  op.p_fa = det[best].apcer;
  std::size_t rejected = 0;
  for (double s : spoof)
    if (s <= op.threshold) ++rejected;
  op.p_miss_spoof = static_cast<double>(rejected) / static_cast<double>(spoof.size());
  return op;
}

TdcfConstants tdcf_constants(const TdcfCosts& c, const AsvOperatingPoint& asv) {
  validate_costs(c);
  TdcfConstants k;
  k.c1 = c.pi_tar * (c.c_miss_cm - c.c_miss_asv * asv.p_miss) - c.pi_non * c.c_fa_asv * asv.p_fa;
  k.c2 = c.c_fa_cm * c.pi_spoof * (1.0 - asv.p_miss_spoof);
  if (k.c1 < 0.0 || k.c2 < 0.0)
    throw NumericError("t-DCF: negative tandem constant; the ASV error rates are too high for these costs");
  if (k.c2 == 0.0)
    k.norm = k.c1;
  else
    k.norm = std::min(k.c1, k.c2);
  if (!(k.norm > 0.0)) throw NumericError("t-DCF: normalisation constant is zero");
  return k;
}

double min_tdcf(const ScoreSet& cm, const AsvScoreSet& asv, const TdcfCosts& costs) {
  std::set<std::string> ids;
  for (const Trial& t : cm.trials)
    if (t.label == Label::kAttack) ids.insert(t.attack_id);
  const AsvOperatingPoint op = asv_operating_point(asv, {ids.begin(), ids.end()});
  const TdcfConstants k = tdcf_constants(costs, op);
  const std::vector<DetPoint> det = det_curve(cm);
  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint& p : det) best = std::min(best, (k.c1 * p.bpcer + k.c2 * p.apcer) / k.norm);
  return best;
}

}  // namespace spectex
