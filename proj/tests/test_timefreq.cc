// spectex/tests/test_timefreq.cc

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
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "spectex/error.h"
#include "spectex/timefreq.h"

using namespace spectex;

namespace {

AudioClip noise_clip(std::uint64_t seed, std::size_t n, int fs = 16000) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  AudioClip c;
  c.sample_rate = fs;
  c.samples.resize(n);
  for (double& s : c.samples) s = g(rng);
  return c;
}

AudioClip tone(double f, std::size_t n, int fs = 16000) {
  AudioClip c;
  c.sample_rate = fs;
  c.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.samples[i] = 0.5 * std::sin(2 * std::numbers::pi * f * i / fs);
  return c;
}

std::size_t argmax_column(const TimeFreqMatrix& m, std::size_t t) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < m.rows; ++r)
    if (m.at(r, t) > m.at(best, t)) best = r;
  return best;
}

}  // namespace

TEST_CASE("stft: a tone at a bin centre peaks in that bin") {
  const StftParams p;
  const int k0 = 37;
  const TimeFreqMatrix m = stft_power(tone(k0 * 16000.0 / p.fft_len, 8000), p);
  CHECK(m.rows == 257);
  CHECK(m.cols == stft_frame_count(8000, p.window_len, p.hop));
  for (std::size_t t = 0; t < m.cols; ++t) CHECK(argmax_column(m, t) == k0);
}

TEST_CASE("stft: all-zero clip gives the power floor") {
  AudioClip z{std::vector<double>(2048, 0.0), 16000};
  for (double v : stft_power(z, StftParams{}).values) CHECK(v == doctest::Approx(-100.0).epsilon(1e-12));
}

TEST_CASE("stft: windowed Parseval per frame") {
  const StftParams p{400, 160, 512};
  const AudioClip c = noise_clip(3, 4000);
  const TimeFreqMatrix m = stft_linear_power(c, p);
  const std::vector<double> w = hann_window(p.window_len);
  for (std::size_t t = 0; t < m.cols; ++t) {
    // Full spectrum from the one-sided half.
    double energy = m.at(0, t) + m.at(m.rows - 1, t);
    for (std::size_t k = 1; k + 1 < m.rows; ++k) energy += 2 * m.at(k, t);
    double time = 0.0;
    for (int n = 0; n < p.window_len; ++n) {
      const double s = w[n] * c.samples[t * p.hop + n];
      time += s * s;
    }
    CHECK(std::abs(energy - p.fft_len * time) <= 1e-6 * p.fft_len * time);
  }
}

TEST_CASE("stft: matches a direct DFT") {
  const StftParams p{300, 128, 512};
  const AudioClip c = noise_clip(4, 2000);
  const TimeFreqMatrix m = stft_linear_power(c, p);
  const std::vector<double> w = hann_window(p.window_len);
  for (std::size_t t = 0; t < m.cols; t += 3) {
    std::vector<double> frame(p.window_len);
    for (int n = 0; n < p.window_len; ++n) frame[n] = w[n] * c.samples[t * p.hop + n];
    const auto ref = oracle::dft_power(frame, p.fft_len);
    for (std::size_t k = 0; k < m.rows; ++k)
      CHECK(std::abs(m.at(k, t) - static_cast<double>(ref[k])) <= 1e-9 * (1.0 + static_cast<double>(ref[k])));
  }
}

TEST_CASE("stft: invalid parameters and short clips") {
  CHECK_THROWS_AS(stft_power(noise_clip(1, 100), StftParams{}), DataError);
  CHECK_THROWS_AS(stft_power(noise_clip(1, 1000), StftParams{512, 0, 512}), ConfigError);
  CHECK_THROWS_AS(stft_power(noise_clip(1, 1000), StftParams{600, 10, 512}), ConfigError);
}

TEST_CASE("dct: orthonormal basis and constant input") {
  for (int n : {1, 2, 7, 20, 40, 96}) {
    const std::vector<double> d = dct_ii_matrix(n);
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += d[a * n + i] * d[b * n + i];
        worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
      }
    CHECK(worst <= 1e-10);
  }
  // Flat filterbank outputs c: coefficient 0 = sqrt(M) log c, the rest 0.
  const int M = 40;
  const double c = 3.7;
  const std::vector<double> logs(M, std::log(c));
  const std::vector<double> cc = dct_ii(logs, 20);
  CHECK(cc[0] == doctest::Approx(std::sqrt(M) * std::log(c)).epsilon(1e-12));
  for (int k = 1; k < 20; ++k) CHECK(std::abs(cc[k]) <= 1e-12);
}

TEST_CASE("dct: matches the direct O(n^2) sum") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {5, 33, 64}) {
    std::vector<double> x(n);
    std::vector<long double> xl(n);
    for (int i = 0; i < n; ++i) xl[i] = x[i] = g(rng);
    const auto got = dct_ii(x, n);
    const auto ref = oracle::dct(xl, n);
    for (int k = 0; k < n; ++k) CHECK(std::abs(got[k] - static_cast<double>(ref[k])) <= 1e-12);
  }
}

TEST_CASE("lfcc: matches filterbank, log and DCT composed from oracles") {
  const LfccParams p;
  const AudioClip c = noise_clip(9, 4000);
  const TimeFreqMatrix m = lfcc_matrix(c, p);
  CHECK(m.rows == static_cast<std::size_t>(p.n_coeffs));
  const std::vector<double> w = hann_window(p.window_len);
  for (std::size_t t = 0; t < m.cols; t += 5) {
    std::vector<double> frame(p.window_len);
    for (int n = 0; n < p.window_len; ++n) frame[n] = w[n] * c.samples[t * p.hop + n];
    const auto power = oracle::dft_power(frame, p.fft_len);
    std::vector<long double> logs(p.n_filters);
    for (int f = 0; f < p.n_filters; ++f) {
      long double e = 0;
      for (std::size_t k = 0; k < power.size(); ++k)
        e += oracle::triangle(f, p.n_filters, static_cast<long double>(k) * c.sample_rate / p.fft_len,
                              c.sample_rate) * power[k];
      logs[f] = std::log(e + kPowerFloor);
    }
    const auto ref = oracle::dct(logs, p.n_coeffs);
    for (int k = 0; k < p.n_coeffs; ++k) CHECK(std::abs(m.at(k, t) - static_cast<double>(ref[k])) <= 1e-8);
  }
}

TEST_CASE("lfcc: filters that cover no bin are a config error") {
  CHECK_THROWS_AS(linear_filterbank(400, 64, 16000), ConfigError);
}

TEST_CASE("cqt: geometry of the default grid") {
  const CqtParams p;
  const auto f = cqt_bin_frequencies(p, 16000);
  REQUIRE(f.size() == 864);
  CHECK(f.front() == doctest::Approx(15.625));
  for (std::size_t j = 1; j < f.size(); ++j)
    CHECK(f[j] / f[j - 1] == doctest::Approx(std::pow(2.0, 1.0 / 96)).epsilon(1e-12));
  CHECK(f.back() < 8000.0);
}

TEST_CASE("cqt: a tone at a bin centre peaks in that bin") {
  const CqtParams p{125.0, 24, 5, 128};
  const auto f = cqt_bin_frequencies(p, 16000);
  for (int j0 : {10, 47, 100}) {
    const TimeFreqMatrix m = cqt_power(tone(f[j0], 6000), p);
    REQUIRE(m.rows == 120);
    for (std::size_t t = 0; t < m.cols; ++t) CHECK(argmax_column(m, t) == static_cast<std::size_t>(j0));
  }
}

TEST_CASE("cqt: matches a direct per-bin windowed DFT") {
  const CqtParams p{250.0, 12, 5, 97};
  const AudioClip c = noise_clip(12, 5000);
  const TimeFreqMatrix m = cqt_linear_power(c, p);
  const auto f = cqt_bin_frequencies(p, 16000);
  const auto lens = cqt_window_lengths(p, 16000);
  const std::size_t n0 = static_cast<std::size_t>(lens.front());
  REQUIRE(m.cols == cqt_frame_count(c.size(), p, 16000));
  double worst = 0.0;
  for (std::size_t t = 0; t < m.cols; ++t)
    for (std::size_t j = 0; j < m.rows; ++j) {
      const long double ref = oracle::cqt_bin_power(c, n0 / 2 + t * p.hop, f[j], lens[j]);
      worst = std::max(worst, static_cast<double>(std::abs(m.at(j, t) - ref) / ref));
    }
  CHECK(worst <= 1e-6);
}

TEST_CASE("cqt: errors") {
  CHECK_THROWS_AS(cqt_power(noise_clip(1, 500), CqtParams{250.0, 12, 5, 97}), DataError);
  CHECK_THROWS_AS(cqt_power(noise_clip(1, 50000), CqtParams{1000.0, 12, 5, 97}), ConfigError);
}

TEST_CASE("cqcc: constant log power and linear resampling") {
  const std::vector<double> col(50, 2.5);
  const auto c = dct_ii(col, 20);
  CHECK(c[0] == doctest::Approx(std::sqrt(50.0) * 2.5).epsilon(1e-12));
  for (int k = 1; k < 20; ++k) CHECK(std::abs(c[k]) <= 1e-12);

  std::vector<double> freqs, vals;
  for (int j = 0; j < 30; ++j) {
    freqs.push_back(100.0 * std::pow(2.0, j / 6.0));
    vals.push_back(3.0 - 0.01 * freqs.back());
  }
  const auto lin = resample_to_linear_axis(freqs, vals);
  for (int i = 1; i < 29; ++i) {
    const double f = freqs.front() + (freqs.back() - freqs.front()) * i / 29.0;
    CHECK(std::abs(lin[i] - (3.0 - 0.01 * f)) <= 1e-9);
  }
}

TEST_CASE("cqcc: matches direct CQT, interpolation and DCT") {
  const CqccParams p{CqtParams{250.0, 12, 5, 97}, 20};
  const AudioClip c = noise_clip(13, 5000);
  const TimeFreqMatrix m = cqcc_matrix(c, p);
  const auto f = cqt_bin_frequencies(p.cqt, 16000);
  const auto lens = cqt_window_lengths(p.cqt, 16000);
  const std::size_t n0 = static_cast<std::size_t>(lens.front());
  const std::size_t J = f.size();
  for (std::size_t t = 0; t < m.cols; t += 4) {
    std::vector<long double> logs(J), lin(J);
    for (std::size_t j = 0; j < J; ++j)
      logs[j] = std::log(oracle::cqt_bin_power(c, n0 / 2 + t * p.cqt.hop, f[j], lens[j]) + kPowerFloor);
    for (std::size_t i = 0; i < J; ++i) {
      const long double x = f.front() + (static_cast<long double>(f.back()) - f.front()) * i / (J - 1);
      std::size_t s = 0;
      while (s + 2 < J && f[s + 1] < x) ++s;
      const long double a = (x - f[s]) / (static_cast<long double>(f[s + 1]) - f[s]);
      lin[i] = logs[s] + a * (logs[s + 1] - logs[s]);
    }
    const auto ref = oracle::dct(lin, 20);
    for (int k = 0; k < 20; ++k) CHECK(std::abs(m.at(k, t) - static_cast<double>(ref[k])) <= 1e-8);
  }
}

TEST_CASE("render: endpoints, constants and order") {
  TimeFreqMatrix m;
  m.kind = TransformKind::kCqt;
  m.rows = 2;
  m.cols = 1;
  m.values = {-3.0, -83.0};
  GrayImage img = render_gray_image(m, 80.0);
  CHECK(img.at(0, 0) == 255);
  CHECK(img.at(1, 0) == 0);

  m.values = {4.0, 4.0};
  img = render_gray_image(m, 80.0);
  CHECK(img.at(0, 0) == 128);
  CHECK(img.at(1, 0) == 128);

  // Values below max - dr clip to 0.
  m.values = {0.0, -500.0};
  CHECK(render_gray_image(m, 80.0).at(1, 0) == 0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> step(0.0, 3.0);
  for (TransformKind kind : {TransformKind::kStft, TransformKind::kLfcc}) {
    TimeFreqMatrix mono;
    mono.kind = kind;
    mono.rows = 200;
    mono.cols = 1;
    double v = -150.0;
    for (int i = 0; i < 200; ++i) mono.values.push_back(v += step(rng));
    const GrayImage g = render_gray_image(mono, 80.0);
    for (int r = 1; r < 200; ++r) CHECK(g.at(r - 1, 0) <= g.at(r, 0));
    if (kind == TransformKind::kLfcc) {
      CHECK(g.at(0, 0) == 0);
      CHECK(g.at(199, 0) == 255);
    }
  }
}

TEST_CASE("render: dB images are invariant to a constant offset") {
  const TimeFreqMatrix m = stft_power(noise_clip(21, 3000), StftParams{});
  TimeFreqMatrix shifted = m;
  for (double& v : shifted.values) v += 17.25;
  CHECK(render_gray_image(m) == render_gray_image(shifted));
}

TEST_CASE("render: non-finite input is a numeric error") {
  TimeFreqMatrix m;
  m.kind = TransformKind::kStft;
  m.rows = 1;
  m.cols = 2;
  m.values = {0.0, std::nan("")};
  CHECK_THROWS_AS(render_gray_image(m), NumericError);
}
