// spectex/synth.h

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

// Synthetic data: a replay-attack mini corpus for smoke tests, and a
// natural-image patch generator used to learn the bundled BSIF banks.

#ifndef SPECTEX_SYNTH_H_
#define SPECTEX_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "spectex/audio_io.h"
#include "spectex/gray_image.h"

namespace spectex {

// "Dead leaves" image: occluding discs with power-law radii and uniform grey
// levels, lightly box-blurred. Its statistics resemble natural images.
GrayImage dead_leaves_image(int size, std::uint64_t seed);

// `count` side x side patches (row-major doubles) cut at random positions
// from a sequence of dead-leaves images.
std::vector<std::vector<double>> natural_patches(int side, std::size_t count,
                                                 std::uint64_t seed);

// Harmonic multi-tone with a syllabic envelope plus mild white noise.
AudioClip synth_bona_fide_clip(std::mt19937_64& rng, int sample_rate, double seconds);

// Replay channel: one-pole low-pass (cascaded), comb-filter reverberation,
// and re-quantisation. `attack_type` (0-based) selects the channel settings.
AudioClip replay_channel(const AudioClip& clip, int attack_type, std::mt19937_64& rng);

struct SynthCorpusOptions {
  int n_bona_fide = 100;
  int n_attack = 100;
  int n_attack_types = 2;
  int sample_rate = 16000;
  double seconds = 1.5;
  double train_fraction = 0.5;
  std::uint64_t seed = 1;
};

// Writes <dir>/audio/<trial>.wav, <dir>/train.protocol, <dir>/eval.protocol
// (native "trial_id label attack_id" lines) and <dir>/asv_scores.txt, a
// synthetic ASV score file ("trial_id attack_id key score") for t-DCF.
void write_synthetic_corpus(const std::filesystem::path& dir, const SynthCorpusOptions& opts);

}  // namespace spectex

#endif  // SPECTEX_SYNTH_H_
