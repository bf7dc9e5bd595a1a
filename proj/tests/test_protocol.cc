// spectex/tests/test_protocol.cc

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

#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "spectex/error.h"
#include "spectex/protocol.h"
#include "test_util.h"

using namespace spectex;

namespace {

std::vector<ProtocolEntry> parse_text(const std::string& name, const std::string& text,
                                      const ProtocolOptions& opts = {}) {
  const auto path = testutil::scratch("protocol") / name;
  testutil::spit(path, text);
  return parse_protocol(path, opts);
}

}  // namespace

TEST_CASE("native protocol lines") {
  const auto e = parse_text("native.txt",
                            "# comment\n"
                            "T001 bonafide -\n"
                            "\n"
                            "T002   spoof\tA07\n");
  REQUIRE(e.size() == 2);
  CHECK(e[0].trial_id == "T001");
  CHECK(e[0].label == Label::kBonaFide);
  CHECK(e[0].attack_id == "-");
  CHECK(e[1].label == Label::kAttack);
  CHECK(e[1].attack_id == "A07");
  CHECK(e[1].scenario == Scenario::kLogical);
}

TEST_CASE("native protocol: 1000 entries round trip") {
  std::mt19937_64 rng(11);
  ProtocolOptions opts;
  opts.scenario = Scenario::kPhysical;
  opts.split = Split::kEval;
  std::vector<ProtocolEntry> entries;
  for (int i = 0; i < 1000; ++i) {
    ProtocolEntry e;
    e.trial_id = "PA_E_" + std::to_string(1000000 + i);
    e.label = rng() % 4 == 0 ? Label::kBonaFide : Label::kAttack;
    e.attack_id = e.label == Label::kBonaFide ? "-" : std::string(1, char('A' + rng() % 3)) + char('A' + rng() % 3);
    e.scenario = opts.scenario;
    e.split = opts.split;
    entries.push_back(e);
  }
  const auto path = testutil::scratch("protocol") / "rt.txt";
  write_protocol(path, entries);
  CHECK(parse_protocol(path, opts) == entries);
}

TEST_CASE("ASVspoof 2019 adapter") {
  ProtocolOptions la;
  la.format = ProtocolFormat::kAsvspoof2019;
  CHECK_THROWS_AS(parse_text("la.txt", "LA_0079 LA_T_1138215 - - bonafide\n"), DataError);
  const auto l = parse_text("la2.txt",
                            "LA_0079 LA_T_1138215 - - bonafide\n"
                            "LA_0079 LA_T_1271820 - A01 spoof\n", la);
  REQUIRE(l.size() == 2);
  CHECK(l[0].trial_id == "LA_T_1138215");
  CHECK(l[0].label == Label::kBonaFide);
  CHECK(l[0].attack_id == "-");
  CHECK(l[1].attack_id == "A01");
  CHECK(l[1].label == Label::kAttack);

  ProtocolOptions pa = la;
  pa.scenario = Scenario::kPhysical;
  const std::string pa_text =
      "PA_0079 PA_T_0000001 aaa - bonafide\n"
      "PA_0079 PA_T_0000002 bcc AB spoof\n";
  const auto p = parse_text("pa.txt", pa_text, pa);
  CHECK(p[0].attack_id == "-");
  CHECK(p[1].attack_id == "AB");
  CHECK(p[1].scenario == Scenario::kPhysical);
  pa.columns.attack = {2, 3};
  const auto p2 = parse_text("pa2.txt", pa_text, pa);
  CHECK(p2[0].attack_id == "-");
  CHECK(p2[1].attack_id == "bccAB");
  pa.columns.attack = {-1};
  CHECK_THROWS_AS(parse_text("pa3.txt", pa_text, pa), ConfigError);
}

TEST_CASE("protocol errors") {
  CHECK_THROWS_AS(parse_text("e1.txt", "T1 human -\n"), DataError);
  CHECK_THROWS_AS(parse_text("e2.txt", "T1 bonafide -\nT1 spoof A01\n"), DataError);
  CHECK_THROWS_AS(parse_text("e3.txt", "T1 bonafide A01\n"), DataError);
  CHECK_THROWS_AS(parse_text("e4.txt", "T1 spoof -\n"), DataError);
  CHECK_THROWS_AS(parse_text("e5.txt", "T1 spoof\n"), DataError);
  CHECK_THROWS_AS(parse_text("e6.txt", "T1 spoof A01 extra\n"), DataError);
  ProtocolOptions la;
  la.format = ProtocolFormat::kAsvspoof2019;
  CHECK_THROWS_AS(parse_text("e7.txt", "LA_0079 LA_T_1 - A01\n", la), DataError);
  CHECK_THROWS_AS(parse_protocol(testutil::scratch("protocol") / "missing.txt"), DataError);
  try {
    parse_text("e8.txt", "T1 bonafide -\n\nT2 bogus -\n");
    FAIL("expected DataError");
  } catch (const DataError& err) {
    CHECK(std::string(err.what()).find(":3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_protocol_format("csv"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("XX"), ConfigError);
  CHECK_THROWS_AS(parse_split("test"), ConfigError);
}

namespace {

struct Corpus {
  ScoreSet scores;
  std::vector<ProtocolEntry> entries;
};

Corpus random_corpus(std::mt19937_64& rng, int n_attacks) {
  Corpus c;
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const std::string id = "B" + std::to_string(i);
    c.entries.push_back({id, Label::kBonaFide, "-"});
    c.scores.trials.push_back({id, "-", Label::kBonaFide, 1.5 + g(rng)});
  }
  for (int i = 0; i < 300; ++i) {
    const int a = i % n_attacks;
    const std::string id = "S" + std::to_string(i);
    const std::string attack = "A" + std::to_string(10 + a);
    c.entries.push_back({id, Label::kAttack, attack});
    // Attack ids differ in strength so the per-PAI rows differ.
    c.scores.trials.push_back({id, attack, Label::kAttack, 0.5 * a + g(rng)});
  }
  std::shuffle(c.scores.trials.begin(), c.scores.trials.end(), rng);
  return c;
}

ScoreSet subset(const Corpus& c, const std::string& attack) {
  ScoreSet s;
  for (const auto& t : c.scores.trials)
    if (t.label == Label::kBonaFide || t.attack_id == attack) s.trials.push_back(t);
  return s;
}

}  // namespace

TEST_CASE("per-PAI report: one attack equals pooled") {
  std::mt19937_64 rng(12);
  const Corpus c = random_corpus(rng, 1);
  const PaiReport r = per_pai_report(c.scores, c.entries);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].attack_id == "A10");
  CHECK(r.rows[0].d_eer == r.pooled.d_eer);
  CHECK(r.rows[0].n_trials == r.pooled.n_trials);
  CHECK(r.pooled.n_trials == 500);
  CHECK(!r.pooled.min_tdcf);
}

TEST_CASE("per-PAI report: rows equal hand-filtered subsets") {
  std::mt19937_64 rng(13);
  const Corpus c = random_corpus(rng, 3);
  const PaiReport r = per_pai_report(c.scores, c.entries);
  REQUIRE(r.rows.size() == 3);
  for (const PaiRow& row : r.rows) {
    const ScoreSet s = subset(c, row.attack_id);
    CHECK(std::abs(row.d_eer - oracle::eer(s)) <= 1e-12);
    CHECK(row.n_trials == s.trials.size());
  }
  CHECK(r.rows[0].attack_id < r.rows[1].attack_id);
  CHECK(std::abs(r.pooled.d_eer - oracle::eer(c.scores)) <= 1e-12);
  // Stronger attacks get higher error.
  CHECK(r.rows[0].d_eer < r.rows[2].d_eer);
}

TEST_CASE("per-PAI report: labels come from the protocol, t-DCF when ASV given") {
  std::mt19937_64 rng(14);
  Corpus c = random_corpus(rng, 2);
  for (auto& t : c.scores.trials) {
    t.label = Label::kBonaFide;
    t.attack_id = "-";
  }
  const PaiReport r = per_pai_report(c.scores, c.entries);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[1].attack_id == "A11");

  AsvScoreSet asv;
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    asv.trials.push_back({"t" + std::to_string(i), "-", AsvKey::kTarget, 3 + g(rng)});
    asv.trials.push_back({"n" + std::to_string(i), "-", AsvKey::kNonTarget, -3 + g(rng)});
    asv.trials.push_back({"s" + std::to_string(i), i % 2 ? "A10" : "A11", AsvKey::kSpoof, 1 + g(rng)});
  }
  const PaiReport rt = per_pai_report(c.scores, c.entries, &asv);
  REQUIRE(rt.rows[0].min_tdcf);
  REQUIRE(rt.pooled.min_tdcf);
}

TEST_CASE("per-PAI report errors and CSV layout") {
  std::mt19937_64 rng(15);
  Corpus c = random_corpus(rng, 2);
  const PaiReport r = per_pai_report(c.scores, c.entries);
  const std::string csv = format_report_csv(r);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "attack_id,d_eer,min_tdcf,n_trials");
  std::getline(is, line);
  CHECK(line.rfind("A10,0.", 0) == 0);
  CHECK(line.find(",,") != std::string::npos);
  std::getline(is, line);
  std::getline(is, line);
  CHECK(line.rfind("pooled,", 0) == 0);
  CHECK(line.substr(line.rfind(',') + 1) == "500");
  const std::string table = format_report_table(r);
  CHECK(table.find("pooled") != std::string::npos);
  CHECK(table.find("A11") != std::string::npos);

  Corpus missing = c;
  missing.scores.trials.pop_back();
  CHECK_THROWS_AS(per_pai_report(missing.scores, missing.entries), DataError);
  Corpus dup = c;
  dup.scores.trials.push_back(dup.scores.trials.front());
  CHECK_THROWS_AS(per_pai_report(dup.scores, dup.entries), DataError);
  std::vector<ProtocolEntry> only_bona;
  for (const auto& e : c.entries)
    if (e.label == Label::kBonaFide) only_bona.push_back(e);
  CHECK_THROWS_AS(per_pai_report(c.scores, only_bona), DataError);
}
