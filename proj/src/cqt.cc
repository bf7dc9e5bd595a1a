// spectex/cqt.cc

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

// Constant-Q transform.
//
// A Hann window is a sum of three complex exponentials, so every windowed
// DFT coefficient is a combination of three rectangular-window sums
//   S_v(start) = sum_{n<N} x(start+n) e^{-i v n},  v in {w, w - 2pi/N, w + 2pi/N}.
// Each rectangular sum is a difference of running prefix sums of x(m)e^{-ivm},
// so one pass over the signal per bin yields all frames of that bin. Cost is
// O(bins * len) instead of O(bins * frames * N_j).

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spectex/error.h"
#include "spectex/timefreq.h"

namespace spectex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phasors are re-derived from the exact angle this often to bound drift.
constexpr std::size_t kResyncInterval = 1024;

struct Cplx {
  double re = 0.0, im = 0.0;
};

inline Cplx cmul(Cplx a, Cplx b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline Cplx polar_unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

void check_params(const CqtParams& p, int sample_rate) {
  if (p.bins_per_octave < 1 || p.n_octaves < 1 || p.hop < 1)
    throw ConfigError("cqt: bins_per_octave, n_octaves and hop must be >= 1");
  const double f_min = cqt_min_frequency(p, sample_rate);
  if (!(f_min > 0.0)) throw ConfigError("cqt: f_min must be positive");
  if (f_min * std::pow(2.0, p.n_octaves) > sample_rate / 2.0 * (1.0 + 1e-12))
    throw ConfigError("cqt: top frequency f_min * 2^n_octaves exceeds Nyquist");
}

}  // namespace

double cqt_min_frequency(const CqtParams& p, int sample_rate) {
  if (p.f_min > 0.0) return p.f_min;
  return sample_rate / 2.0 / std::pow(2.0, p.n_octaves);
}

std::vector<double> cqt_bin_frequencies(const CqtParams& p, int sample_rate) {
  const double f_min = cqt_min_frequency(p, sample_rate);
  const int bins = p.bins_per_octave * p.n_octaves;
  std::vector<double> f(bins);
  for (int j = 0; j < bins; ++j)
    f[j] = f_min * std::exp2(static_cast<double>(j) / p.bins_per_octave);
  return f;
}

std::vector<int> cqt_window_lengths(const CqtParams& p, int sample_rate) {
  const double q = 1.0 / (std::exp2(1.0 / p.bins_per_octave) - 1.0);
  const std::vector<double> f = cqt_bin_frequencies(p, sample_rate);
  std::vector<int> n(f.size());
  for (std::size_t j = 0; j < f.size(); ++j)
    n[j] = static_cast<int>(std::ceil(q * sample_rate / f[j]));
  return n;
}

std::size_t cqt_frame_count(std::size_t len, const CqtParams& p, int sample_rate) {
  const std::vector<int> n = cqt_window_lengths(p, sample_rate);
  const std::size_t longest = static_cast<std::size_t>(*std::max_element(n.begin(), n.end()));
  if (len < longest) return 0;
  return (len - longest) / p.hop + 1;
}

TimeFreqMatrix cqt_linear_power(const AudioClip& clip, const CqtParams& p) {
  validate_clip(clip);
  check_params(p, clip.sample_rate);
  const int fs = clip.sample_rate;
  const std::vector<double> freqs = cqt_bin_frequencies(p, fs);
  const std::vector<int> lens = cqt_window_lengths(p, fs);
  const std::size_t longest = static_cast<std::size_t>(lens.front());
  if (clip.size() < longest)
    throw DataError("cqt: clip (" + std::to_string(clip.size()) +
                    " samples) shorter than the longest kernel (" +
                    std::to_string(longest) + " samples)");
  const std::size_t frames = cqt_frame_count(clip.size(), p, fs);
  const std::size_t bins = freqs.size();
  const std::size_t hop = static_cast<std::size_t>(p.hop);

  TimeFreqMatrix m;
  m.kind = TransformKind::kCqt;
  m.rows = bins;
  m.cols = frames;
  m.values.assign(bins * frames, 0.0);
  m.axis = freqs;
  m.hop_seconds = static_cast<double>(p.hop) / fs;

  const double* x = clip.samples.data();
  std::vector<Cplx> start_sum[3], end_sum[3];
  for (int v = 0; v < 3; ++v) {
    start_sum[v].resize(frames);
    end_sum[v].resize(frames);
  }

  for (std::size_t j = 0; j < bins; ++j) {
    const std::size_t n_j = static_cast<std::size_t>(lens[j]);
    const std::size_t first = longest / 2 - n_j / 2;  // start of frame 0
    const std::size_t last_end = first + (frames - 1) * hop + n_j;
    const double omega = kTwoPi * freqs[j] / fs;
    const double delta = kTwoPi / static_cast<double>(n_j);
    const double nu[3] = {omega, omega - delta, omega + delta};

    Cplx step[3], ph[3], acc[3];
    for (int v = 0; v < 3; ++v) step[v] = polar_unit(-nu[v]);

    std::size_t next_start = 0, next_end = 0;
    std::size_t next_start_idx = first, next_end_idx = first + n_j;
    for (std::size_t m_idx = first; m_idx <= last_end; ++m_idx) {
      // Capture prefix values P(m_idx) = sum_{first <= k < m_idx}.
      if (m_idx == next_start_idx && next_start < frames) {
        for (int v = 0; v < 3; ++v) start_sum[v][next_start] = acc[v];
        ++next_start;
        next_start_idx += hop;
      }
      if (m_idx == next_end_idx && next_end < frames) {
        for (int v = 0; v < 3; ++v) end_sum[v][next_end] = acc[v];
        ++next_end;
        next_end_idx += hop;
      }
      if (m_idx == last_end) break;
      const std::size_t rel = m_idx - first;
      if (rel % kResyncInterval == 0) {
        for (int v = 0; v < 3; ++v) ph[v] = polar_unit(-nu[v] * static_cast<double>(rel));
      }
      const double s = x[m_idx];
      for (int v = 0; v < 3; ++v) {
        acc[v].re += s * ph[v].re;
        acc[v].im += s * ph[v].im;
        ph[v] = cmul(ph[v], step[v]);
      }
    }

    const double inv_n = 1.0 / static_cast<double>(n_j);
    for (std::size_t t = 0; t < frames; ++t) {
      const double rel_start = static_cast<double>(t * hop);
      Cplx total;
      const double weight[3] = {0.5, -0.25, -0.25};
      for (int v = 0; v < 3; ++v) {
        Cplx diff{end_sum[v][t].re - start_sum[v][t].re,
                  end_sum[v][t].im - start_sum[v][t].im};
        // Re-reference the phase to the window start.
        Cplx rot = polar_unit(nu[v] * rel_start);
        Cplx local = cmul(diff, rot);
        total.re += weight[v] * local.re;
        total.im += weight[v] * local.im;
      }
      total.re *= inv_n;
      total.im *= inv_n;
      m.at(j, t) = total.re * total.re + total.im * total.im;
    }
  }
  return m;
}

TimeFreqMatrix cqt_power(const AudioClip& clip, const CqtParams& p) {
  TimeFreqMatrix m = cqt_linear_power(clip, p);
  for (double& v : m.values) v = 10.0 * std::log10(v + kPowerFloor);
  return m;
}

}  // namespace spectex
