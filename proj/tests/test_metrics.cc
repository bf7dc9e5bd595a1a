// spectex/tests/test_metrics.cc

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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "spectex/error.h"
#include "spectex/metrics.h"
#include "test_util.h"

using namespace spectex;

namespace {

ScoreSet make(const std::vector<double>& bona, const std::vector<double>& attack,
              const std::string& attack_id = "A01") {
  ScoreSet s;
  int i = 0;
  for (double v : bona) s.trials.push_back({"B" + std::to_string(i++), "-", Label::kBonaFide, v});
  for (double v : attack) s.trials.push_back({"S" + std::to_string(i++), attack_id, Label::kAttack, v});
  return s;
}

// Random set with deliberate ties (scores rounded to a coarse grid half the time).
ScoreSet random_set(std::mt19937_64& rng) {
  const int nb = std::uniform_int_distribution<int>(1, 1000)(rng);
  const int na = std::uniform_int_distribution<int>(1, 1000)(rng);
  const double shift = std::uniform_real_distribution<double>(-1.0, 3.0)(rng);
  const bool coarse = rng() % 2 == 0;
  std::normal_distribution<double> g(0.0, 1.0);
  auto draw = [&](double mu) {
    const double v = mu + g(rng);
    return coarse ? std::round(v * 4) / 4 : v;
  };
  std::vector<double> b, a;
  for (int i = 0; i < nb; ++i) b.push_back(draw(shift));
  for (int i = 0; i < na; ++i) a.push_back(draw(0.0));
  ScoreSet s = make(b, a);
  for (std::size_t i = 0; i < s.trials.size(); ++i)
    if (s.trials[i].label == Label::kAttack) s.trials[i].attack_id = "A0" + std::to_string(1 + i % 3);
  return s;
}

AsvScoreSet random_asv(std::mt19937_64& rng) {
  AsvScoreSet asv;
  std::normal_distribution<double> tar(3.0, 1.5), non(-3.0, 1.5), spoof(0.5, 2.0);
  int k = 0;
  for (int i = 0; i < 300; ++i) {
    asv.trials.push_back({"T" + std::to_string(k++), "-", AsvKey::kTarget, tar(rng)});
    asv.trials.push_back({"N" + std::to_string(k++), "-", AsvKey::kNonTarget, non(rng)});
  }
  for (int i = 0; i < 300; ++i)
    asv.trials.push_back({"P" + std::to_string(k++), "A0" + std::to_string(1 + i % 4), AsvKey::kSpoof, spoof(rng)});
  return asv;
}

}  // namespace

TEST_CASE("det: separable and degenerate sets") {
  const auto det = det_curve(make({2, 3}, {0, 1}));
  bool zero = false;
  for (const auto& p : det) zero |= p.apcer == 0.0 && p.bpcer == 0.0;
  CHECK(zero);

  const auto flat = det_curve(make({5, 5, 5}, {5, 5}));
  REQUIRE(flat.size() == 2);
  CHECK(flat[0].apcer == 1.0);
  CHECK(flat[0].bpcer == 0.0);
  CHECK(flat[1].apcer == 0.0);
  CHECK(flat[1].bpcer == 1.0);
  CHECK_THROWS_AS(det_curve(make({1, 2}, {})), DataError);
  CHECK_THROWS_AS(det_curve(make({}, {1, 2})), DataError);
}

TEST_CASE("det: every point equals brute-force counting, curves are monotone") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const ScoreSet s = random_set(rng);
    const auto det = det_curve(s);
    for (std::size_t i = 0; i < det.size(); ++i) {
      const auto r = oracle::rates_at(s, det[i].threshold);
      CHECK(det[i].apcer == r.apcer);
      CHECK(det[i].bpcer == r.bpcer);
      if (i > 0) {
        CHECK(det[i].threshold > det[i - 1].threshold);
        CHECK(det[i].apcer <= det[i - 1].apcer);
        CHECK(det[i].bpcer >= det[i - 1].bpcer);
      }
    }
    CHECK(det.front().apcer == 1.0);
    CHECK(det.back().bpcer == 1.0);
  }
}

TEST_CASE("eer: examples") {
  CHECK(compute_eer(make({2, 3}, {0, 1})) == 0.0);
  CHECK(compute_eer(make({1, 3}, {2, 4})) == doctest::Approx(0.5).epsilon(1e-15));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a, b;
  for (int i = 0; i < 10000; ++i) {
    b.push_back(g(rng));
    a.push_back(g(rng));
  }
  const double e = compute_eer(make(b, a));
  CHECK(e >= 0.48);
  CHECK(e <= 0.52);
}

TEST_CASE("eer and bpcer: match the exhaustive threshold sweep") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const ScoreSet s = random_set(rng);
    CHECK(std::abs(compute_eer(s) - oracle::eer(s)) <= 1e-12);
    for (double t : {0.1, 0.05, 0.01}) CHECK(std::abs(bpcer_at_apcer(s, t) - oracle::bpcer_at(s, t)) <= 1e-12);
  }
}

TEST_CASE("eer and bpcer: rank statistics") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const ScoreSet s = random_set(rng);
    ScoreSet doubled = s, shifted = s;
    for (auto& t : doubled.trials) t.score *= 2.0;
    for (auto& t : shifted.trials) t.score = std::exp(t.score / 8.0);
    CHECK(compute_eer(doubled) == compute_eer(s));
    CHECK(std::abs(compute_eer(shifted) - compute_eer(s)) <= 1e-12);
    CHECK(bpcer_at_apcer(shifted, 0.05) == bpcer_at_apcer(s, 0.05));
  }
}

TEST_CASE("bpcer: separable sets and argument checks") {
  const ScoreSet s = make({5, 6, 7}, {1, 2});
  for (double t : {0.1, 0.05, 0.01}) CHECK(bpcer_at_apcer(s, t) == 0.0);
  CHECK_THROWS_AS(bpcer_at_apcer(s, 0.0), ConfigError);
  CHECK_THROWS_AS(bpcer_at_apcer(s, 1.0), ConfigError);
}

TEST_CASE("t-DCF: perfect separation costs nothing") {
  std::mt19937_64 rng(5);
  const AsvScoreSet asv = random_asv(rng);
  CHECK(min_tdcf(make({5, 6, 7}, {1, 2}), asv) == 0.0);
}

TEST_CASE("t-DCF: zero spoof prior reduces to the miss rate") {
  std::mt19937_64 rng(6);
  const AsvScoreSet asv = random_asv(rng);
  TdcfCosts c;
  c.pi_spoof = 0.0;
  c.pi_tar = 0.99;
  c.pi_non = 0.01;
  const ScoreSet s = random_set(rng);
  const AsvOperatingPoint op = asv_operating_point(asv, {"A01", "A02", "A03"});
  const TdcfConstants k = tdcf_constants(c, op);
  CHECK(k.c2 == 0.0);
  CHECK(k.norm == k.c1);
  double best = 1.0;
  for (const auto& p : det_curve(s)) best = std::min(best, p.bpcer);
  CHECK(min_tdcf(s, asv, c) == best);
}

TEST_CASE("t-DCF: matches the exhaustive oracle and ignores CM score scale") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const AsvScoreSet asv = random_asv(rng);
    const ScoreSet s = random_set(rng);
    const double got = min_tdcf(s, asv);
    CHECK(std::abs(got - oracle::min_tdcf(s, asv, TdcfCosts{})) <= 1e-12);
    ScoreSet warped = s;
    for (auto& t : warped.trials) t.score = std::exp(t.score / 8.0);
    CHECK(std::abs(min_tdcf(warped, asv) - got) <= 1e-12);
  }
}

TEST_CASE("t-DCF: errors") {
  std::mt19937_64 rng(8);
  const ScoreSet s = make({1, 2}, {0});
  AsvScoreSet flat;
  flat.trials = {{"a", "-", AsvKey::kTarget, 1.0}, {"b", "-", AsvKey::kNonTarget, 1.0},
                 {"c", "A01", AsvKey::kSpoof, 1.0}};
  CHECK_THROWS_AS(min_tdcf(s, flat), DataError);
  AsvScoreSet no_spoof = random_asv(rng);
  std::erase_if(no_spoof.trials, [](const AsvTrial& t) { return t.key == AsvKey::kSpoof; });
  CHECK_THROWS_AS(min_tdcf(s, no_spoof), DataError);
  TdcfCosts bad;
  bad.pi_tar = 0.5;
  CHECK_THROWS_AS(validate_costs(bad), ConfigError);
  bad = TdcfCosts{};
  bad.c_fa_cm = 0.0;
  CHECK_THROWS_AS(validate_costs(bad), ConfigError);
  // An ASV that misses most targets makes C1 negative.
  AsvScoreSet awful;
  for (int i = 0; i < 10; ++i) {
    awful.trials.push_back({"t" + std::to_string(i), "-", AsvKey::kTarget, -5.0 + i});
    awful.trials.push_back({"n" + std::to_string(i), "-", AsvKey::kNonTarget, -4.5 + i});
    awful.trials.push_back({"s" + std::to_string(i), "A01", AsvKey::kSpoof, 0.0});
  }
  TdcfCosts harsh;
  harsh.c_miss_asv = 5.0;
  CHECK_THROWS_AS(min_tdcf(make({1, 2}, {0}), awful, harsh), NumericError);
}

TEST_CASE("score files round trip exactly") {
  std::mt19937_64 rng(9);
  const ScoreSet s = random_set(rng);
  const auto dir = testutil::scratch("scores");
  write_score_file(dir / "s.txt", s);
  const ScoreSet back = read_score_file(dir / "s.txt");
  REQUIRE(back.trials.size() == s.trials.size());
  for (std::size_t i = 0; i < s.trials.size(); ++i) {
    CHECK(back.trials[i].trial_id == s.trials[i].trial_id);
    CHECK(back.trials[i].attack_id == s.trials[i].attack_id);
    CHECK(back.trials[i].label == s.trials[i].label);
    CHECK(back.trials[i].score == s.trials[i].score);
  }
  const AsvScoreSet asv = random_asv(rng);
  write_asv_scores(dir / "a.txt", asv);
  const AsvScoreSet ab = read_asv_scores(dir / "a.txt");
  REQUIRE(ab.trials.size() == asv.trials.size());
  for (std::size_t i = 0; i < asv.trials.size(); ++i) CHECK(ab.trials[i].score == asv.trials[i].score);

  testutil::spit(dir / "bad.txt", "T1 - bonafide 0.5\nT2 A01 spoof nan\n");
  CHECK_THROWS_AS(read_score_file(dir / "bad.txt"), DataError);
  testutil::spit(dir / "bad2.txt", "T1 - maybe 0.5\n");
  CHECK_THROWS_AS(read_score_file(dir / "bad2.txt"), DataError);
  CHECK(parse_label("genuine") == Label::kBonaFide);
  CHECK(parse_label("attack") == Label::kAttack);
}
