// spectex/tests/test_classify.cc

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
#include "spectex/classify.h"
#include "spectex/error.h"
#include "test_util.h"

using namespace spectex;

namespace {

struct Blobs {
  FeatureList X;
  std::vector<int> y;
};

Blobs blobs(std::uint64_t seed, int n_pos, int n_neg, double sep, int d = 2) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Blobs b;
  for (int i = 0; i < n_pos + n_neg; ++i) {
    const int label = i < n_pos ? 1 : -1;
    std::vector<double> x(d);
    for (int j = 0; j < d; ++j) x[j] = g(rng) + (j == 0 ? label * sep : 0.0);
    b.X.push_back(x);
    b.y.push_back(label);
  }
  return b;
}

double objective(const SvmModel& m, const FeatureList& X, const std::vector<int>& y, const std::vector<double>& Ci) {
  double o = 0.5 * m.b * m.b;
  for (double w : m.w) o += 0.5 * w * w;
  for (std::size_t i = 0; i < X.size(); ++i) o += Ci[i] * std::max(0.0, 1.0 - y[i] * svm_score(m, X[i]));
  return o;
}

}  // namespace

TEST_CASE("svm: symmetric separable pair") {
  const FeatureList X{{1.0}, {-1.0}};
  const std::vector<int> y{1, -1};
  SvmOptions o;
  o.C = 1e4;
  o.standardize = false;
  o.gap_tol = 1e-9;
  o.max_epochs = 100000;
  const SvmModel m = svm_train(X, y, o);
  CHECK(std::abs(svm_score(m, std::vector<double>{0.0})) <= 1e-3);
  CHECK(svm_score(m, X[0]) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(svm_score(m, X[1]) == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("svm: separable blobs are classified perfectly") {
  const Blobs b = blobs(1, 60, 140, 5.0, 4);
  const SvmModel m = svm_train(b.X, b.y);
  for (std::size_t i = 0; i < b.X.size(); ++i) CHECK(svm_score(m, b.X[i]) * b.y[i] > 0);
}

TEST_CASE("svm: objective agrees with a projected subgradient reference") {
  for (int trial = 0; trial < 5; ++trial) {
    const Blobs b = blobs(10 + trial, 30 + 5 * trial, 40, 1.0, 3);
    SvmOptions o;
    o.standardize = false;
    o.gap_tol = 1e-6;
    o.max_epochs = 10000;
    o.C = 0.5 + trial;
    SvmTrainInfo info;
    const SvmModel m = svm_train(b.X, b.y, o, &info);
    CHECK(info.converged);
    std::vector<double> Ci;
    std::size_t n_pos = 0;
    for (int v : b.y) n_pos += v > 0;
    const double n = b.y.size();
    for (int v : b.y) Ci.push_back(o.C * n / (2.0 * (v > 0 ? n_pos : n - n_pos)));
    std::vector<std::vector<double>> Z;
    for (const auto& x : b.X) {
      Z.push_back(x);
      Z.back().push_back(1.0);
    }
    const double ours = objective(m, b.X, b.y, Ci);
    CHECK(ours == doctest::Approx(info.primal).epsilon(1e-9));
    const double ref = oracle::svm_subgradient_objective(Z, b.y, Ci, 20000);
    CHECK(std::abs(ours - ref) <= 0.01 * ref);
    CHECK(ours <= ref * (1 + 1e-4));
  }
}

TEST_CASE("svm: deterministic for a fixed seed") {
  const Blobs b = blobs(3, 50, 50, 0.5, 5);
  SvmOptions o;
  o.seed = 4;
  const SvmModel a = svm_train(b.X, b.y, o), c = svm_train(b.X, b.y, o);
  CHECK(a.w == c.w);
  CHECK(a.b == c.b);
}

TEST_CASE("svm: scoring") {
  SvmModel m;
  m.dim = 3;
  m.mean = {0, 0, 0};
  m.scale = {1, 1, 1};
  m.w = {1, 0, 0};
  m.b = 0;
  CHECK(svm_score(m, std::vector<double>{3, -7, 11}) == 3.0);

  const Blobs b = blobs(5, 20, 20, 1.0, 3);
  const SvmModel t = svm_train(b.X, b.y);
  const std::vector<double> x{0.3, -1.2, 2.0};
  for (double alpha : {0.0, 0.5, 2.0, -3.0}) {
    std::vector<double> ax = x;
    for (double& v : ax) v *= alpha;
    const auto w = t.effective_weights();
    double dot = 0;
    for (int j = 0; j < 3; ++j) dot += w[j] * x[j];
    CHECK(svm_score(t, ax) == doctest::Approx(alpha * dot + t.effective_bias()).epsilon(1e-12));
  }
  const auto batch = svm_score_batch(t, b.X);
  for (std::size_t i = 0; i < b.X.size(); ++i) CHECK(batch[i] == svm_score(t, b.X[i]));
  CHECK_THROWS_AS(svm_score(t, std::vector<double>{1.0}), DataError);
}

TEST_CASE("svm: model file round trip") {
  const Blobs b = blobs(6, 20, 20, 1.0, 4);
  const SvmModel m = svm_train(b.X, b.y);
  const auto dir = testutil::scratch("svm_io");
  write_svm(dir / "m.svm", m);
  const SvmModel back = read_svm(dir / "m.svm");
  CHECK(back.mean == m.mean);
  CHECK(back.scale == m.scale);
  CHECK(back.w == m.w);
  CHECK(back.b == m.b);
  CHECK(testutil::slurp(dir / "m.svm").rfind("LSVM1\n4\n", 0) == 0);
}

TEST_CASE("svm: input checks") {
  const FeatureList X{{1.0}, {2.0}};
  CHECK_THROWS_AS(svm_train(X, std::vector<int>{1, 1}), DataError);
  CHECK_THROWS_AS(svm_train(X, std::vector<int>{1, 0}), DataError);
  CHECK_THROWS_AS(svm_train(X, std::vector<int>{1}), DataError);
  SvmOptions o;
  o.C = 0;
  CHECK_THROWS_AS(svm_train(X, std::vector<int>{1, -1}, o), ConfigError);
}

TEST_CASE("gmm llr: identity, antisymmetry and separation") {
  std::mt19937_64 rng(7);
  GmmModel bona = oracle::random_gmm(rng, 2, 2);
  GmmModel attack = bona;
  for (double& mu : attack.means) mu += 6.0;
  const auto frames = oracle::sample_gmm(rng, bona, 10);
  CHECK(gmm_llr_score(bona, bona, frames) == 0.0);
  CHECK(gmm_llr_score(bona, attack, frames) == -gmm_llr_score(attack, bona, frames));
  int positive = 0;
  for (int t = 0; t < 100; ++t) positive += gmm_llr_score(bona, attack, oracle::sample_gmm(rng, bona, 20)) > 0;
  CHECK(positive >= 99);
}
