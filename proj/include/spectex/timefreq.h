// spectex/timefreq.h

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

// Speech-to-image transforms: STFT and CQT log-power spectrograms, their
// cepstral counterparts LFCC and CQCC, and rendering to 8-bit gray images.

#ifndef SPECTEX_TIMEFREQ_H_
#define SPECTEX_TIMEFREQ_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spectex/audio_io.h"
#include "spectex/gray_image.h"

namespace spectex {

enum class TransformKind { kStft, kLfcc, kCqt, kCqcc };

std::string_view to_string(TransformKind kind);
TransformKind parse_transform_kind(std::string_view name);  // "stft", "lfcc", ...

// Floor added to power before taking logarithms.
inline constexpr double kPowerFloor = 1e-10;

// Real frequency x frame matrix, row-major.
struct TimeFreqMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  TransformKind kind = TransformKind::kStft;
  // Bin centre frequencies in Hz (STFT, CQT) or coefficient indices
  // (LFCC, CQCC); one entry per row.
  std::vector<double> axis;
  double hop_seconds = 0.0;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  std::vector<double> column(std::size_t c) const;
};

struct StftParams {
  int window_len = 512;
  int hop = 256;
  int fft_len = 512;
};

struct LfccParams {
  int n_filters = 40;
  int n_coeffs = 20;
  int window_len = 320;  // 20 ms at 16 kHz
  int hop = 160;         // 10 ms at 16 kHz
  int fft_len = 512;
};

struct CqtParams {
  double f_min = 0.0;  // <= 0 selects (fs/2) / 2^n_octaves
  int bins_per_octave = 96;
  int n_octaves = 9;
  int hop = 256;
};

struct CqccParams {
  CqtParams cqt;
  int n_coeffs = 20;
};

// Periodic Hann window 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> hann_window(int n);

// Number of STFT frames: floor((len - window) / hop) + 1.
std::size_t stft_frame_count(std::size_t len, int window_len, int hop);

// Linear power |X_t(k)|^2, rows = fft_len/2 + 1. Frame t covers samples
// [t*hop, t*hop + window_len), Hann-weighted and zero-padded to fft_len.
TimeFreqMatrix stft_linear_power(const AudioClip& clip, const StftParams& p);

// 10 log10(|X_t(k)|^2 + kPowerFloor).
TimeFreqMatrix stft_power(const AudioClip& clip, const StftParams& p);

// n_filters x (fft_len/2 + 1) triangular filters with centres linearly spaced
// between 0 and fs/2. Row-major.
std::vector<double> linear_filterbank(int n_filters, int fft_len, int sample_rate);

// Orthonormal DCT-II basis, n x n row-major (row k = basis function k).
std::vector<double> dct_ii_matrix(int n);

// First n_out orthonormal DCT-II coefficients of x.
std::vector<double> dct_ii(std::span<const double> x, int n_out);

TimeFreqMatrix lfcc_matrix(const AudioClip& clip, const LfccParams& p);

// f_min resolved against the sample rate.
double cqt_min_frequency(const CqtParams& p, int sample_rate);
// f_min * 2^(j/B), j = 0 .. B*n_octaves - 1.
std::vector<double> cqt_bin_frequencies(const CqtParams& p, int sample_rate);
// ceil(Q fs / f_j) with Q = 1 / (2^(1/B) - 1).
std::vector<int> cqt_window_lengths(const CqtParams& p, int sample_rate);
// floor((len - longest_window) / hop) + 1.
std::size_t cqt_frame_count(std::size_t len, const CqtParams& p, int sample_rate);

// Linear CQT power. All bins share frame centres; frame t is centred on
// sample floor(N_0/2) + t*hop where N_0 is the longest window, and bin j
// sums N_j Hann-weighted samples starting at centre - floor(N_j/2):
//   X_j(t) = (1/N_j) sum_n w_j(n) x(start + n) exp(-i 2 pi f_j n / fs).
// Evaluated with running prefix sums, exact up to rounding.
TimeFreqMatrix cqt_linear_power(const AudioClip& clip, const CqtParams& p);

// 10 log10(linear + kPowerFloor).
TimeFreqMatrix cqt_power(const AudioClip& clip, const CqtParams& p);

// Linear interpolation of values sampled at ascending `freqs` onto
// freqs.size() equally spaced points between freqs.front() and freqs.back().
std::vector<double> resample_to_linear_axis(std::span<const double> freqs,
                                            std::span<const double> values);

TimeFreqMatrix cqcc_matrix(const AudioClip& clip, const CqccParams& p);

// STFT/CQT: clip to [max - dynamic_range_db, max] then map affinely to
// [0, 255]. LFCC/CQCC: min-max map to [0, 255]. Rounding is half-up. A
// constant matrix renders as all 128.
GrayImage render_gray_image(const TimeFreqMatrix& tfm, double dynamic_range_db = 80.0);

}  // namespace spectex

#endif  // SPECTEX_TIMEFREQ_H_
