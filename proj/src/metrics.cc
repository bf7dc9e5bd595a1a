// spectex/metrics.cc

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
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "spectex/error.h"
#include "spectex/metrics.h"
#include "metrics_internal.h"

namespace spectex {

namespace internal {

double parse_score(std::string_view tok, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw DataError(where + ": bad score '" + std::string(tok) + "'");
  return v;
}

std::string format_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> det_thresholds(std::vector<double> all) {
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<double> t;
  t.reserve(all.size() + 1);
  t.push_back(-std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    double mid = all[i] + (all[i + 1] - all[i]) / 2.0;
    if (!(mid < all[i + 1])) mid = all[i];
    t.push_back(mid);
  }
  t.push_back(std::numeric_limits<double>::infinity());
  return t;
}

std::vector<DetPoint> two_class_det(std::vector<double> pos, std::vector<double> neg) {
  if (pos.empty() || neg.empty()) throw DataError("metrics: both classes must be present");
  std::vector<double> all(pos);
  all.insert(all.end(), neg.begin(), neg.end());
  const std::vector<double> taus = det_thresholds(std::move(all));
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<DetPoint> det;
  det.reserve(taus.size());
  const double np = static_cast<double>(pos.size()), nn = static_cast<double>(neg.size());
  for (double tau : taus) {
    const auto neg_above = neg.end() - std::upper_bound(neg.begin(), neg.end(), tau);
    const auto pos_at_or_below = std::upper_bound(pos.begin(), pos.end(), tau) - pos.begin();
    det.push_back({tau, static_cast<double>(neg_above) / nn, static_cast<double>(pos_at_or_below) / np});
  }
  return det;
}

}  // namespace internal

std::string_view to_string(Label label) {
  return label == Label::kBonaFide ? "bonafide" : "spoof";
}

Label parse_label(std::string_view t) {
  if (t == "bonafide" || t == "bona-fide" || t == "genuine") return Label::kBonaFide;
  if (t == "spoof" || t == "attack") return Label::kAttack;
  throw DataError("unknown label '" + std::string(t) + "'");
}

void write_score_file(const std::filesystem::path& path, const ScoreSet& scores) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  for (const Trial& t : scores.trials)
    os << t.trial_id << ' ' << t.attack_id << ' ' << to_string(t.label) << ' '
       << internal::format_score(t.score) << '\n';
  if (!os) throw DataError("write failed: " + path.string());
}

ScoreSet read_score_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  ScoreSet out;
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    std::istringstream ls(line);
    std::string id, attack, label, score, extra;
    if (!(ls >> id)) continue;  // blank line
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (!(ls >> attack >> label >> score) || (ls >> extra))
      throw DataError(where + ": expected 'trial_id attack_id label score'");
    Trial t;
    t.trial_id = id;
    t.attack_id = attack;
    t.label = parse_label(label);
    t.score = internal::parse_score(score, where);
    out.trials.push_back(std::move(t));
  }
  return out;
}

std::vector<DetPoint> det_curve(const ScoreSet& scores) {
  std::vector<double> bona, attack;
  for (const Trial& t : scores.trials) {
    if (!std::isfinite(t.score)) throw DataError("metrics: non-finite score for " + t.trial_id);
    (t.label == Label::kBonaFide ? bona : attack).push_back(t.score);
  }
  // Bona fide play the "positive" role: BPCER counts them at or below tau.
  return internal::two_class_det(std::move(bona), std::move(attack));
}

void write_det_curve(const std::filesystem::path& path, const std::vector<DetPoint>& det) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  for (const DetPoint& p : det)
    os << internal::format_score(p.threshold) << ' ' << internal::format_score(p.apcer) << ' '
       << internal::format_score(p.bpcer) << '\n';
}

double compute_eer(const ScoreSet& scores) {
  const std::vector<DetPoint> det = det_curve(scores);
  for (std::size_t i = 0; i < det.size(); ++i) {
    if (det[i].bpcer < det[i].apcer) continue;
    if (det[i].bpcer == det[i].apcer || i == 0) return det[i].apcer;
    // Crossing between i-1 (apcer > bpcer) and i (bpcer > apcer).
    const double d0 = det[i - 1].apcer - det[i - 1].bpcer;
    const double d1 = det[i].bpcer - det[i].apcer;
    const double t = d0 / (d0 + d1);
    return det[i - 1].apcer + t * (det[i].apcer - det[i - 1].apcer);
  }
  return det.back().apcer;  // unreachable: the +inf point has bpcer = 1
}

double bpcer_at_apcer(const ScoreSet& scores, double apcer_target) {
  if (!(apcer_target > 0.0 && apcer_target < 1.0))
    throw ConfigError("bpcer_at_apcer: target must be in (0, 1)");
  const std::vector<DetPoint> det = det_curve(scores);
  for (const DetPoint& p : det)
    if (p.apcer <= apcer_target) return p.bpcer;
  return det.back().bpcer;
}

}  // namespace spectex
