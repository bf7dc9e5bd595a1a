// spectex/timefreq.cc

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

#include "spectex/timefreq.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "spectex/error.h"

namespace spectex {

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::kStft: return "stft";
    case TransformKind::kLfcc: return "lfcc";
    case TransformKind::kCqt: return "cqt";
    case TransformKind::kCqcc: return "cqcc";
  }
  return "?";
}

TransformKind parse_transform_kind(std::string_view name) {
  if (name == "stft") return TransformKind::kStft;
  if (name == "lfcc") return TransformKind::kLfcc;
  if (name == "cqt") return TransformKind::kCqt;
  if (name == "cqcc") return TransformKind::kCqcc;
  throw ConfigError("unknown transform '" + std::string(name) + "'");
}

std::vector<double> TimeFreqMatrix::column(std::size_t c) const {
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
  return out;
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  return w;
}

std::size_t stft_frame_count(std::size_t len, int window_len, int hop) {
  if (len < static_cast<std::size_t>(window_len)) return 0;
  return (len - window_len) / hop + 1;
}

TimeFreqMatrix stft_linear_power(const AudioClip& clip, const StftParams& p) {
  validate_clip(clip);
  if (p.window_len < 1 || p.hop < 1 || p.fft_len < p.window_len)
    throw ConfigError("stft: need 1 <= window_len <= fft_len and hop >= 1");
  if (clip.size() < static_cast<std::size_t>(p.window_len))
    throw DataError("stft: clip shorter than one window");

  const std::size_t frames = stft_frame_count(clip.size(), p.window_len, p.hop);
  const std::size_t bins = p.fft_len / 2 + 1;
  const std::vector<double> win = hann_window(p.window_len);

  TimeFreqMatrix m;
  m.kind = TransformKind::kStft;
  m.rows = bins;
  m.cols = frames;
  m.values.assign(bins * frames, 0.0);
  m.hop_seconds = static_cast<double>(p.hop) / clip.sample_rate;
  m.axis.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    m.axis[k] = static_cast<double>(k) * clip.sample_rate / p.fft_len;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(p.fft_len), out;
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * p.hop;
    std::fill(in.begin(), in.end(), std::complex<double>(0.0, 0.0));
    for (int n = 0; n < p.window_len; ++n) in[n] = win[n] * clip.samples[start + n];
    fft.fwd(out, in);
    for (std::size_t k = 0; k < bins; ++k) m.at(k, t) = std::norm(out[k]);
  }
  return m;
}

TimeFreqMatrix stft_power(const AudioClip& clip, const StftParams& p) {
  TimeFreqMatrix m = stft_linear_power(clip, p);
  for (double& v : m.values) v = 10.0 * std::log10(v + kPowerFloor);
  return m;
}

std::vector<double> linear_filterbank(int n_filters, int fft_len, int sample_rate) {
  if (n_filters < 2) throw ConfigError("filterbank: need at least 2 filters");
  const int bins = fft_len / 2 + 1;
  const double nyquist = sample_rate / 2.0;
  const double step = nyquist / (n_filters + 1);
  std::vector<double> fb(static_cast<std::size_t>(n_filters) * bins, 0.0);
  for (int m = 0; m < n_filters; ++m) {
    const double lo = m * step, mid = (m + 1) * step, hi = (m + 2) * step;
    double total = 0.0;
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / fft_len;
      double w = 0.0;
      if (f > lo && f <= mid) w = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) w = (hi - f) / (hi - mid);
      fb[static_cast<std::size_t>(m) * bins + k] = w;
      total += w;
    }
    if (total <= 0.0)
      throw ConfigError("filterbank: filter " + std::to_string(m) +
                        " covers no FFT bin; use fewer filters or a longer FFT");
  }
  return fb;
}

std::vector<double> dct_ii_matrix(int n) {
  std::vector<double> d(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    const double s = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i)
      d[static_cast<std::size_t>(k) * n + i] =
          s * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
  }
  return d;
}

namespace {

// Applies the first n_out rows of a precomputed n x n DCT basis.
std::vector<double> apply_dct(std::span<const double> basis, std::span<const double> x,
                              int n_out) {
  const std::size_t n = x.size();
  std::vector<double> out(n_out, 0.0);
  for (int k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += basis[k * n + i] * x[i];
    out[k] = acc;
  }
  return out;
}

TimeFreqMatrix cepstra_from_log_columns(const TimeFreqMatrix& logs, int n_coeffs,
                                        TransformKind kind) {
  const int n = static_cast<int>(logs.rows);
  const std::vector<double> basis = dct_ii_matrix(n);
  TimeFreqMatrix out;
  out.kind = kind;
  out.rows = n_coeffs;
  out.cols = logs.cols;
  out.values.assign(out.rows * out.cols, 0.0);
  out.hop_seconds = logs.hop_seconds;
  out.axis.resize(n_coeffs);
  for (int k = 0; k < n_coeffs; ++k) out.axis[k] = k;
  for (std::size_t t = 0; t < logs.cols; ++t) {
    const std::vector<double> col = logs.column(t);
    const std::vector<double> c = apply_dct(basis, col, n_coeffs);
    for (int k = 0; k < n_coeffs; ++k) out.at(k, t) = c[k];
  }
  return out;
}

}  // namespace

std::vector<double> dct_ii(std::span<const double> x, int n_out) {
  if (n_out < 0 || static_cast<std::size_t>(n_out) > x.size())
    throw ConfigError("dct_ii: n_out out of range");
  return apply_dct(dct_ii_matrix(static_cast<int>(x.size())), x, n_out);
}

TimeFreqMatrix lfcc_matrix(const AudioClip& clip, const LfccParams& p) {
  if (p.n_filters < 2) throw ConfigError("lfcc: need at least 2 filters");
  if (p.n_coeffs < 1 || p.n_coeffs > p.n_filters)
    throw ConfigError("lfcc: need 1 <= n_coeffs <= n_filters");
  const TimeFreqMatrix power =
      stft_linear_power(clip, StftParams{p.window_len, p.hop, p.fft_len});
  const std::vector<double> fb = linear_filterbank(p.n_filters, p.fft_len, clip.sample_rate);

  TimeFreqMatrix logs;
  logs.rows = p.n_filters;
  logs.cols = power.cols;
  logs.values.assign(logs.rows * logs.cols, 0.0);
  logs.hop_seconds = power.hop_seconds;
  for (std::size_t t = 0; t < power.cols; ++t) {
    for (int m = 0; m < p.n_filters; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < power.rows; ++k)
        e += fb[m * power.rows + k] * power.at(k, t);
      logs.at(m, t) = std::log(e + kPowerFloor);
    }
  }
  return cepstra_from_log_columns(logs, p.n_coeffs, TransformKind::kLfcc);
}

std::vector<double> resample_to_linear_axis(std::span<const double> freqs,
                                            std::span<const double> values) {
  const std::size_t n = freqs.size();
  if (n != values.size() || n < 2)
    throw ConfigError("resample: need matching axes with at least 2 points");
  std::vector<double> out(n);
  const double lo = freqs.front(), hi = freqs.back();
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) { out[i] = values.front(); continue; }
    if (i == n - 1) { out[i] = values.back(); continue; }
    const double f = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    while (seg + 2 < n && freqs[seg + 1] < f) ++seg;
    const double a = (f - freqs[seg]) / (freqs[seg + 1] - freqs[seg]);
    out[i] = values[seg] + a * (values[seg + 1] - values[seg]);
  }
  return out;
}

TimeFreqMatrix cqcc_matrix(const AudioClip& clip, const CqccParams& p) {
  const TimeFreqMatrix power = cqt_linear_power(clip, p.cqt);
  if (p.n_coeffs < 1 || static_cast<std::size_t>(p.n_coeffs) > power.rows)
    throw ConfigError("cqcc: need 1 <= n_coeffs <= number of CQT bins");
  TimeFreqMatrix logs = power;
  for (std::size_t t = 0; t < power.cols; ++t) {
    std::vector<double> col(power.rows);
    for (std::size_t r = 0; r < power.rows; ++r) col[r] = std::log(power.at(r, t) + kPowerFloor);
    const std::vector<double> lin = resample_to_linear_axis(power.axis, col);
    for (std::size_t r = 0; r < power.rows; ++r) logs.at(r, t) = lin[r];
  }
  return cepstra_from_log_columns(logs, p.n_coeffs, TransformKind::kCqcc);
}

GrayImage render_gray_image(const TimeFreqMatrix& tfm, double dynamic_range_db) {
  if (tfm.rows == 0 || tfm.cols == 0) throw DataError("render: empty matrix");
  if (!(dynamic_range_db > 0.0)) throw ConfigError("render: dynamic range must be > 0");
  double lo = tfm.values.front(), hi = tfm.values.front();
  for (double v : tfm.values) {
    if (!std::isfinite(v)) throw NumericError("render: non-finite matrix entry");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  GrayImage img(static_cast<int>(tfm.rows), static_cast<int>(tfm.cols), 128);
  if (lo == hi) return img;

  const bool db_kind = tfm.kind == TransformKind::kStft || tfm.kind == TransformKind::kCqt;
  for (std::size_t r = 0; r < tfm.rows; ++r) {
    for (std::size_t c = 0; c < tfm.cols; ++c) {
      const double v = tfm.at(r, c);
      double unit;
      if (db_kind) {
        // Offsets from the maximum keep the mapping shift invariant.
        const double below = std::min(hi - v, dynamic_range_db);
        unit = (dynamic_range_db - below) / dynamic_range_db;
      } else {
        unit = (v - lo) / (hi - lo);
      }
      const double px = std::floor(unit * 255.0 + 0.5);
      img.at(static_cast<int>(r), static_cast<int>(c)) =
          static_cast<std::uint8_t>(std::clamp(px, 0.0, 255.0));
    }
  }
  return img;
}

}  // namespace spectex
