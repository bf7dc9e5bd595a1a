// spectex/synth.cc

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

#include "spectex/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "spectex/error.h"
#include "spectex/metrics.h"
#include "spectex/protocol.h"

namespace spectex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::string trial_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "S_%05d", index);
  return buf;
}

}  // namespace

GrayImage dead_leaves_image(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GrayImage canvas(size, size, 128);
  std::vector<char> covered(static_cast<std::size_t>(size) * size, 0);
  std::size_t n_covered = 0;
  const std::size_t target = covered.size();
  const double r_min = 1.0, r_max = size / 3.0;
  // Front-to-back: a pixel keeps the first disc that covers it.
  for (int disc = 0; disc < 20000 && n_covered < target; ++disc) {
    // Density proportional to r^-3 via inverse CDF.
    const double u = uniform(rng, 0.0, 1.0);
    const double inv2 = 1.0 / (r_min * r_min) - u * (1.0 / (r_min * r_min) - 1.0 / (r_max * r_max));
    const double radius = 1.0 / std::sqrt(inv2);
    const double cy = uniform(rng, -radius, size + radius);
    const double cx = uniform(rng, -radius, size + radius);
    const auto grey = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, 255)(rng));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
    const int y1 = std::min(size - 1, static_cast<int>(std::ceil(cy + radius)));
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
    const int x1 = std::min(size - 1, static_cast<int>(std::ceil(cx + radius)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dy = y - cy, dx = x - cx;
        if (dy * dy + dx * dx > radius * radius) continue;
        char& c = covered[static_cast<std::size_t>(y) * size + x];
        if (c) continue;
        c = 1;
        ++n_covered;
        canvas.at(y, x) = grey;
      }
    }
  }
  // 3x3 box blur softens the disc edges.
  GrayImage out(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      int sum = 0, n = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int yy = y + dy, xx = x + dx;
          if (yy < 0 || xx < 0 || yy >= size || xx >= size) continue;
          sum += canvas.at(yy, xx);
          ++n;
        }
      out.at(y, x) = static_cast<std::uint8_t>((sum + n / 2) / n);
    }
  }
  return out;
}

std::vector<std::vector<double>> natural_patches(int side, std::size_t count,
                                                 std::uint64_t seed) {
  if (side < 1) throw ConfigError("natural_patches: side must be >= 1");
  constexpr int kImageSize = 160;
  constexpr std::size_t kPatchesPerImage = 400;
  if (side > kImageSize) throw ConfigError("natural_patches: side too large");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> patches;
  patches.reserve(count);
  GrayImage img;
  std::uniform_int_distribution<int> pos(0, kImageSize - side);
  for (std::size_t i = 0; i < count; ++i) {
    if (i % kPatchesPerImage == 0) img = dead_leaves_image(kImageSize, rng());
    const int y = pos(rng), x = pos(rng);
    std::vector<double> p(static_cast<std::size_t>(side) * side);
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) p[static_cast<std::size_t>(r) * side + c] = img.at(y + r, x + c);
    patches.push_back(std::move(p));
  }
  return patches;
}

AudioClip synth_bona_fide_clip(std::mt19937_64& rng, int sample_rate, double seconds) {
  AudioClip clip;
  clip.sample_rate = sample_rate;
  const std::size_t n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  clip.samples.assign(n, 0.0);

  const double f0 = uniform(rng, 100.0, 250.0);
  const double vibrato_rate = uniform(rng, 3.0, 6.0);
  const double vibrato_depth = uniform(rng, 0.005, 0.02);
  const double syllable_rate = uniform(rng, 2.0, 5.0);
  const int max_harmonic = static_cast<int>(0.45 * sample_rate / f0);
  std::vector<double> amp(max_harmonic + 1, 0.0), phase(max_harmonic + 1, 0.0);
  for (int h = 1; h <= max_harmonic; ++h) {
    amp[h] = uniform(rng, 0.5, 1.0) / h;
    phase[h] = uniform(rng, 0.0, kTwoPi);
  }
  std::normal_distribution<double> noise(0.0, 1.0);
  double inst_phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double f = f0 * (1.0 + vibrato_depth * std::sin(kTwoPi * vibrato_rate * t));
    inst_phase += kTwoPi * f / sample_rate;
    double s = 0.0;
    for (int h = 1; h <= max_harmonic; ++h) s += amp[h] * std::sin(h * inst_phase + phase[h]);
    const double env = 0.55 + 0.45 * std::sin(kTwoPi * syllable_rate * t);
    clip.samples[i] = 0.2 * env * s;
  }
  double power = 0.0;
  for (double s : clip.samples) power += s * s;
  power /= static_cast<double>(n);
  const double noise_std = std::sqrt(power) * std::pow(10.0, -40.0 / 20.0);  // ~40 dB SNR
  for (double& s : clip.samples) s += noise_std * noise(rng);
  return peak_normalize(clip);
}

AudioClip replay_channel(const AudioClip& clip, int attack_type, std::mt19937_64& rng) {
  validate_clip(clip);
  const int fs = clip.sample_rate;
  // Loudspeaker quality and room distance per attack type.
  const double cutoff_hz = attack_type % 2 == 0 ? 2500.0 : 3500.0;
  const double reverb_gain = attack_type % 2 == 0 ? 0.6 : 0.8;
  const int bits = attack_type % 2 == 0 ? 8 : 10;

  AudioClip out = clip;
  const double a = std::exp(-kTwoPi * cutoff_hz / fs);
  for (int pass = 0; pass < 4; ++pass) {
    double y = 0.0;
    for (double& s : out.samples) {
      y = (1.0 - a) * s + a * y;
      s = y;
    }
  }
  // Parallel feedback combs with slightly randomised delays.
  const double delays_ms[3] = {29.7, 37.1, 41.1};
  std::vector<double> wet(out.size(), 0.0);
  for (double d_ms : delays_ms) {
    const auto delay = static_cast<std::size_t>((d_ms + uniform(rng, -1.0, 1.0)) * fs / 1000.0);
    std::vector<double> buf(out.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      buf[i] = out.samples[i] + (i >= delay ? 0.8 * buf[i - delay] : 0.0);
      wet[i] += buf[i] / 3.0;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += reverb_gain * wet[i];
  out = peak_normalize(out);
  const double levels = std::pow(2.0, bits - 1);
  for (double& s : out.samples) s = std::round(s * levels) / levels;
  return peak_normalize(out);
}

void write_synthetic_corpus(const std::filesystem::path& dir, const SynthCorpusOptions& opts) {
  if (opts.n_bona_fide < 2 || opts.n_attack < 2 || opts.n_attack_types < 1)
    throw ConfigError("synth: need >= 2 clips per class and >= 1 attack type");
  if (!(opts.train_fraction > 0.0 && opts.train_fraction < 1.0))
    throw ConfigError("synth: train_fraction must be in (0, 1)");
  std::filesystem::create_directories(dir / "audio");
  std::mt19937_64 rng(opts.seed);

  std::vector<ProtocolEntry> train, eval;
  int index = 0;
  auto add = [&](bool bona, int attack_type, int ordinal, int class_size) {
    const std::string id = trial_name(index++);
    AudioClip clip = synth_bona_fide_clip(rng, opts.sample_rate, opts.seconds);
    if (!bona) clip = replay_channel(clip, attack_type, rng);
    write_wav(dir / "audio" / (id + ".wav"), clip);
    ProtocolEntry e;
    e.trial_id = id;
    e.label = bona ? Label::kBonaFide : Label::kAttack;
    e.attack_id = bona ? "-" : "R" + std::to_string(attack_type + 1);
    e.scenario = Scenario::kPhysical;
    const bool in_train = ordinal < static_cast<int>(std::lround(opts.train_fraction * class_size));
    e.split = in_train ? Split::kTrain : Split::kEval;
    (in_train ? train : eval).push_back(e);
  };
  for (int i = 0; i < opts.n_bona_fide; ++i) add(true, 0, i, opts.n_bona_fide);
  // Attack types interleave so both splits see every type.
  for (int i = 0; i < opts.n_attack; ++i) {
    const int type = i % opts.n_attack_types;
    add(false, type, i, opts.n_attack);
  }
  write_protocol(dir / "train.protocol", train);
  write_protocol(dir / "eval.protocol", eval);

  // ASV scores: well separated target/non-target, spoofs in between.
  AsvScoreSet asv;
  std::normal_distribution<double> tar(4.0, 1.0), non(-4.0, 1.0);
  int k = 0;
  char buf[32];
  for (int i = 0; i < 200; ++i) {
    std::snprintf(buf, sizeof(buf), "ASV_%05d", k++);
    asv.trials.push_back({buf, "-", AsvKey::kTarget, tar(rng)});
    std::snprintf(buf, sizeof(buf), "ASV_%05d", k++);
    asv.trials.push_back({buf, "-", AsvKey::kNonTarget, non(rng)});
  }
  for (int type = 0; type < opts.n_attack_types; ++type) {
    std::normal_distribution<double> spoof(1.0 + type, 2.0);
    for (int i = 0; i < 100; ++i) {
      std::snprintf(buf, sizeof(buf), "ASV_%05d", k++);
      asv.trials.push_back({buf, "R" + std::to_string(type + 1), AsvKey::kSpoof, spoof(rng)});
    }
  }
  write_asv_scores(dir / "asv_scores.txt", asv);
}

}  // namespace spectex
