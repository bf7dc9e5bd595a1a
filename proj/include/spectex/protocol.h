// spectex/protocol.h

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

// Trial manifests and per-attack result tables.

#ifndef SPECTEX_PROTOCOL_H_
#define SPECTEX_PROTOCOL_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spectex/metrics.h"

namespace spectex {

enum class Scenario { kLogical, kPhysical };
enum class Split { kTrain, kDev, kEval };

std::string_view to_string(Scenario s);  // "LA" / "PA"
Scenario parse_scenario(std::string_view s);
std::string_view to_string(Split s);     // "train" / "dev" / "eval"
Split parse_split(std::string_view s);

struct ProtocolEntry {
  std::string trial_id;
  Label label = Label::kBonaFide;
  std::string attack_id = "-";  // "-" iff bona fide
  Scenario scenario = Scenario::kLogical;
  Split split = Split::kTrain;

  bool operator==(const ProtocolEntry&) const = default;
};

enum class ProtocolFormat { kNative, kAsvspoof2019 };

ProtocolFormat parse_protocol_format(std::string_view s);  // "native" / "asvspoof2019"

// Zero-based whitespace-separated columns of the ASVspoof 2019 protocol
// files ("SPEAKER FILE ENV ATTACK KEY"). Attack columns are concatenated in
// the listed order; a column holding "-" contributes nothing.
struct Asvspoof2019Columns {
  int trial = 1;
  std::vector<int> attack{3};
  int label = 4;
};

struct ProtocolOptions {
  ProtocolFormat format = ProtocolFormat::kNative;
  Scenario scenario = Scenario::kLogical;
  Split split = Split::kTrain;
  Asvspoof2019Columns columns;
};

// Native lines: "trial_id label attack_id". Lines that are blank or start
// with '#' are skipped. Throws DataError naming the line on malformed input,
// unknown labels, label/attack_id mismatch and duplicate trial ids.
std::vector<ProtocolEntry> parse_protocol(const std::filesystem::path& path,
                                          const ProtocolOptions& opts = {});

// Writes the native format.
void write_protocol(const std::filesystem::path& path, const std::vector<ProtocolEntry>& entries);

struct PaiRow {
  std::string attack_id;  // "pooled" for the pooled row
  double d_eer = 0.0;
  std::optional<double> min_tdcf;
  std::size_t n_trials = 0;  // bona fide + attack trials in the row
};

struct PaiReport {
  std::vector<PaiRow> rows;  // attack ids in lexicographic order
  PaiRow pooled;
};

// Each row scores all bona fide trials against one attack id; the pooled
// row uses every attack. Labels and attack ids come from `entries`; scores
// are looked up by trial id. min t-DCF is filled in when `asv` is given.
PaiReport per_pai_report(const ScoreSet& scores, const std::vector<ProtocolEntry>& entries,
                         const AsvScoreSet* asv = nullptr, const TdcfCosts& costs = {});

// "attack_id,d_eer,min_tdcf,n_trials" (rates as fractions; empty min_tdcf
// when not computed).
std::string format_report_csv(const PaiReport& report);
// Aligned plain-text table with rates in percent.
std::string format_report_table(const PaiReport& report);

}  // namespace spectex

#endif  // SPECTEX_PROTOCOL_H_
