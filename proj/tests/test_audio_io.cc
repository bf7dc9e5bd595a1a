// spectex/tests/test_audio_io.cc

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
#include <cstdint>
#include <random>
#include <string>

#include "doctest.h"
#include "spectex/audio_io.h"
#include "spectex/error.h"
#include "test_util.h"

using namespace spectex;

namespace {

void put16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}
void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Hand-assembled RIFF/WAVE bytes.
std::string wav_bytes(int channels, int bits, int rate, const std::vector<std::int16_t>& data,
                      bool extra_chunk = false) {
  std::string fmt;
  put16(fmt, 1);
  put16(fmt, static_cast<std::uint16_t>(channels));
  put32(fmt, static_cast<std::uint32_t>(rate));
  put32(fmt, static_cast<std::uint32_t>(rate * channels * bits / 8));
  put16(fmt, static_cast<std::uint16_t>(channels * bits / 8));
  put16(fmt, static_cast<std::uint16_t>(bits));
  std::string body = "WAVE";
  body += "fmt ";
  put32(body, static_cast<std::uint32_t>(fmt.size()));
  body += fmt;
  if (extra_chunk) {
    body += "LIST";
    put32(body, 3);
    body += "abc";
    body.push_back('\0');  // pad byte
  }
  body += "data";
  put32(body, static_cast<std::uint32_t>(data.size() * 2));
  for (std::int16_t v : data) put16(body, static_cast<std::uint16_t>(v));
  std::string out = "RIFF";
  put32(out, static_cast<std::uint32_t>(body.size()));
  return out + body;
}

}  // namespace

TEST_CASE("read_wav echoes the header of a 16 kHz mono file") {
  const auto dir = testutil::scratch("audio_header");
  testutil::spit(dir / "a.wav", wav_bytes(1, 16, 16000, std::vector<std::int16_t>(16000, 7)));
  const AudioClip clip = read_wav(dir / "a.wav");
  CHECK(clip.size() == 16000);
  CHECK(clip.sample_rate == 16000);
  CHECK(clip.duration() == doctest::Approx(1.0));
}

TEST_CASE("read_wav scales by 1/32768") {
  const auto dir = testutil::scratch("audio_scale");
  testutil::spit(dir / "a.wav", wav_bytes(1, 16, 8000, {32767, -32768, 0}));
  const AudioClip clip = read_wav(dir / "a.wav");
  REQUIRE(clip.size() == 3);
  CHECK(clip.samples[0] == 32767.0 / 32768.0);
  CHECK(clip.samples[0] == doctest::Approx(0.999969).epsilon(1e-6));
  CHECK(clip.samples[1] == -1.0);
  CHECK(clip.samples[2] == 0.0);
}

TEST_CASE("read_wav skips unknown chunks") {
  const auto dir = testutil::scratch("audio_chunks");
  testutil::spit(dir / "a.wav", wav_bytes(1, 16, 8000, {1, 2, 3}, true));
  CHECK(read_wav(dir / "a.wav").size() == 3);
}

TEST_CASE("read_wav rejects what it cannot decode") {
  const auto dir = testutil::scratch("audio_reject");
  testutil::spit(dir / "stereo.wav", wav_bytes(2, 16, 16000, {1, 2, 3, 4}));
  CHECK_THROWS_AS(read_wav(dir / "stereo.wav"), DataError);
  testutil::spit(dir / "eight.wav", wav_bytes(1, 8, 16000, {1, 2}));
  CHECK_THROWS_AS(read_wav(dir / "eight.wav"), DataError);
  std::string truncated = wav_bytes(1, 16, 16000, {1, 2, 3, 4});
  truncated.resize(truncated.size() - 3);
  testutil::spit(dir / "short.wav", truncated);
  CHECK_THROWS_AS(read_wav(dir / "short.wav"), DataError);
  testutil::spit(dir / "junk.wav", "not a wave file at all");
  CHECK_THROWS_AS(read_wav(dir / "junk.wav"), DataError);
  CHECK_THROWS_AS(read_wav(dir / "missing.wav"), DataError);
}

TEST_CASE("peak_normalize examples") {
  AudioClip c{{0.5, -0.25}, 16000};
  const AudioClip n = peak_normalize(c);
  CHECK(n.samples == std::vector<double>{1.0, -0.5});
  AudioClip z{{0.0, 0.0, 0.0}, 16000};
  CHECK(peak_normalize(z).samples == z.samples);
}

TEST_CASE("peak_normalize of random clips has unit peak") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 0.1);
  for (int trial = 0; trial < 50; ++trial) {
    AudioClip c;
    c.sample_rate = 16000;
    c.samples.resize(100 + trial * 37);
    for (double& s : c.samples) s = g(rng);
    double peak = 0.0;
    for (double s : peak_normalize(c).samples) peak = std::max(peak, std::abs(s));
    CHECK(std::abs(peak - 1.0) <= 1e-6);
  }
}

TEST_CASE("write_wav then read_wav is lossless up to 16-bit quantisation") {
  const auto dir = testutil::scratch("audio_roundtrip");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0 - 1.0 / 32768.0);
  for (int trial = 0; trial < 20; ++trial) {
    AudioClip c;
    c.sample_rate = 8000 + 1000 * trial;
    c.samples.resize(1 + 311 * trial);
    for (double& s : c.samples) s = u(rng);
    write_wav(dir / "r.wav", c);
    const AudioClip back = read_wav(dir / "r.wav");
    REQUIRE(back.size() == c.size());
    CHECK(back.sample_rate == c.sample_rate);
    double worst = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(back.samples[i] - c.samples[i]));
    CHECK(worst <= std::ldexp(1.0, -15));
  }
}

TEST_CASE("validate_clip rejects empty and non-finite clips") {
  CHECK_THROWS_AS(validate_clip(AudioClip{{}, 16000}), DataError);
  CHECK_THROWS_AS(validate_clip(AudioClip{{0.1}, 0}), DataError);
  CHECK_THROWS_AS(validate_clip(AudioClip{{0.1, std::nan("")}, 16000}), DataError);
  CHECK_NOTHROW(validate_clip(AudioClip{{0.1}, 16000}));
}
