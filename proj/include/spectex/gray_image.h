// spectex/gray_image.h

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

#ifndef SPECTEX_GRAY_IMAGE_H_
#define SPECTEX_GRAY_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace spectex {

// 8-bit grayscale image, row-major. For spectrogram renderings row 0 is the
// lowest frequency bin (or coefficient 0) and columns are time frames.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int h, int w, std::uint8_t fill = 0)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

  std::uint8_t at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t& at(int row, int col) {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }

  // Copy of the h x w region whose top-left corner is (row, col).
  GrayImage crop(int row, int col, int h, int w) const;

  bool operator==(const GrayImage&) const = default;
};

// Binary PGM (P5, maxval 255). Rows are written in storage order.
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace spectex

#endif  // SPECTEX_GRAY_IMAGE_H_
