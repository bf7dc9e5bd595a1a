// spectex/audio_io.h

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

#ifndef SPECTEX_AUDIO_IO_H_
#define SPECTEX_AUDIO_IO_H_

#include <filesystem>
#include <vector>

namespace spectex {

// Mono waveform. Samples are nominally in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Throws DataError unless the clip is non-empty, finite, and has a positive
// sample rate.
void validate_clip(const AudioClip& clip);

// Reads a RIFF/WAVE file holding 16-bit PCM mono audio. Samples are scaled by
// 1/32768. Any other encoding or channel count is rejected; convert FLAC or
// stereo material beforehand (e.g. `sox in.flac -b 16 -c 1 out.wav`).
AudioClip read_wav(const std::filesystem::path& path);

// Writes 16-bit PCM mono. Samples are scaled by 32768, rounded to nearest and
// saturated to [-32768, 32767].
void write_wav(const std::filesystem::path& path, const AudioClip& clip);

// Divides by the peak absolute amplitude. An all-zero clip is returned as is.
AudioClip peak_normalize(const AudioClip& clip);

}  // namespace spectex

#endif  // SPECTEX_AUDIO_IO_H_
