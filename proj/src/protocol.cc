// spectex/protocol.cc

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
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "spectex/error.h"
#include "spectex/protocol.h"

namespace spectex {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> out;
  for (std::string tok; ls >> tok;) out.push_back(tok);
  return out;
}

Label label_at(const std::string& tok, const std::string& where) {
  try {
    return parse_label(tok);
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string_view to_string(Scenario s) { return s == Scenario::kLogical ? "LA" : "PA"; }

Scenario parse_scenario(std::string_view s) {
  if (s == "LA" || s == "la" || s == "logical") return Scenario::kLogical;
  if (s == "PA" || s == "pa" || s == "physical") return Scenario::kPhysical;
  throw ConfigError("unknown scenario '" + std::string(s) + "'");
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kEval: return "eval";
  }
  return "?";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  if (s == "eval") return Split::kEval;
  throw ConfigError("unknown split '" + std::string(s) + "'");
}

ProtocolFormat parse_protocol_format(std::string_view s) {
  if (s == "native") return ProtocolFormat::kNative;
  if (s == "asvspoof2019") return ProtocolFormat::kAsvspoof2019;
  throw ConfigError("unknown protocol format '" + std::string(s) + "'");
}

std::vector<ProtocolEntry> parse_protocol(const std::filesystem::path& path,
                                          const ProtocolOptions& opts) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open protocol " + path.string());
  const Asvspoof2019Columns& cols = opts.columns;
  int max_col = std::max(cols.trial, cols.label);
  for (int c : cols.attack) max_col = std::max(max_col, c);
  if (cols.trial < 0 || cols.label < 0 ||
      std::any_of(cols.attack.begin(), cols.attack.end(), [](int c) { return c < 0; }))
    throw ConfigError("protocol: negative column index");

  std::vector<ProtocolEntry> out;
  std::unordered_set<std::string> seen;
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    const std::vector<std::string> tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    ProtocolEntry e;
    e.scenario = opts.scenario;
    e.split = opts.split;
    if (opts.format == ProtocolFormat::kNative) {
      if (tok.size() != 3) throw DataError(where + ": expected 'trial_id label attack_id'");
      e.trial_id = tok[0];
      e.label = label_at(tok[1], where);
      e.attack_id = tok[2];
    } else {
      if (static_cast<int>(tok.size()) <= max_col)
        throw DataError(where + ": expected at least " + std::to_string(max_col + 1) + " columns");
      e.trial_id = tok[cols.trial];
      e.label = label_at(tok[cols.label], where);
      std::string attack;
      for (int c : cols.attack)
        if (tok[c] != "-") attack += tok[c];
      e.attack_id = attack.empty() ? "-" : attack;
      // Bona fide rows may carry environment codes; they are not attacks.
      if (e.label == Label::kBonaFide) e.attack_id = "-";
    }
    if ((e.label == Label::kBonaFide) != (e.attack_id == "-"))
      throw DataError(where + ": attack_id must be '-' exactly for bona fide trials");
    if (!seen.insert(e.trial_id).second) throw DataError(where + ": duplicate trial id " + e.trial_id);
    out.push_back(std::move(e));
  }
  return out;
}

void write_protocol(const std::filesystem::path& path, const std::vector<ProtocolEntry>& entries) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  for (const ProtocolEntry& e : entries)
    os << e.trial_id << ' ' << to_string(e.label) << ' ' << e.attack_id << '\n';
  if (!os) throw DataError("write failed: " + path.string());
}

PaiReport per_pai_report(const ScoreSet& scores, const std::vector<ProtocolEntry>& entries,
                         const AsvScoreSet* asv, const TdcfCosts& costs) {
  std::unordered_map<std::string, double> by_id;
  for (const Trial& t : scores.trials)
    if (!by_id.emplace(t.trial_id, t.score).second)
      throw DataError("report: duplicate score for trial " + t.trial_id);

  std::vector<Trial> bona;
  std::map<std::string, std::vector<Trial>> attacks;
  for (const ProtocolEntry& e : entries) {
    const auto it = by_id.find(e.trial_id);
    if (it == by_id.end()) throw DataError("report: no score for trial " + e.trial_id);
    Trial t{e.trial_id, e.attack_id, e.label, it->second};
    if (e.label == Label::kBonaFide)
      bona.push_back(std::move(t));
    else
      attacks[e.attack_id].push_back(std::move(t));
  }
  if (bona.empty()) throw DataError("report: no bona fide trials");
  if (attacks.empty()) throw DataError("report: no attack trials");

  auto make_row = [&](const std::string& name, const std::vector<const std::vector<Trial>*>& groups) {
    ScoreSet set;
    set.trials = bona;
    for (const auto* g : groups) set.trials.insert(set.trials.end(), g->begin(), g->end());
    PaiRow row;
    row.attack_id = name;
    row.n_trials = set.trials.size();
    row.d_eer = compute_eer(set);
    if (asv) row.min_tdcf = min_tdcf(set, *asv, costs);
    return row;
  };

  PaiReport report;
  std::vector<const std::vector<Trial>*> all;
  for (const auto& [id, trials] : attacks) {
    report.rows.push_back(make_row(id, {&trials}));
    all.push_back(&trials);
  }
  report.pooled = make_row("pooled", all);
  return report;
}

std::string format_report_csv(const PaiReport& report) {
  std::ostringstream os;
  os << "attack_id,d_eer,min_tdcf,n_trials\n";
  auto line = [&](const PaiRow& r) {
    os << r.attack_id << ',' << fixed(r.d_eer, 6) << ',' << (r.min_tdcf ? fixed(*r.min_tdcf, 6) : "")
       << ',' << r.n_trials << '\n';
  };
  for (const PaiRow& r : report.rows) line(r);
  line(report.pooled);
  return os.str();
}

std::string format_report_table(const PaiReport& report) {
  std::vector<std::vector<std::string>> cells{{"attack_id", "D-EER(%)", "min t-DCF", "n_trials"}};
  auto add = [&](const PaiRow& r) {
    cells.push_back({r.attack_id, pct(r.d_eer), r.min_tdcf ? fixed(*r.min_tdcf, 4) : "-",
                     std::to_string(r.n_trials)});
  };
  for (const PaiRow& r : report.rows) add(r);
  add(report.pooled);
  std::vector<std::size_t> width(4, 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t c = 0; c < 4; ++c) {
      const std::string& s = cells[i][c];
      if (c == 0)
        os << s << std::string(width[c] - s.size(), ' ');
      else
        os << "  " << std::string(width[c] - s.size(), ' ') << s;
    }
    os << '\n';
    if (i == 0 || i + 2 == cells.size()) {
      std::size_t total = width[0];
      for (std::size_t c = 1; c < 4; ++c) total += 2 + width[c];
      os << std::string(total, '-') << '\n';
    }
  }
  return os.str();
}

}  // namespace spectex
