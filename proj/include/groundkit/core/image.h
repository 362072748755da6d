// Copyright 2026 The Groundkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GROUNDKIT_CORE_IMAGE_H_
#define GROUNDKIT_CORE_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace groundkit {

struct Rgb {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Row-major 8-bit RGB image. Every image in the toolkit uses this layout;
// other formats are converted when they are loaded.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  // Requires width, height >= 1.
  ImageBuffer(int width, int height, Rgb fill = {});

  static absl::StatusOr<ImageBuffer> FromPixels(int width, int height,
                                                std::vector<uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb At(int x, int y) const {
    const size_t i = Offset(x, y);
    return Rgb{pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void Set(int x, int y, Rgb c) {
    const size_t i = Offset(x, y);
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

  std::span<const uint8_t> pixels() const { return pixels_; }
  std::span<uint8_t> mutable_pixels() { return pixels_; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  size_t Offset(int x, int y) const {
    return (static_cast<size_t>(y) * static_cast<size_t>(width_) +
            static_cast<size_t>(x)) *
           3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> pixels_;
};

// Number of pixels that differ between two equally sized images.
int64_t CountChangedPixels(const ImageBuffer& a, const ImageBuffer& b);

// Nearest-neighbour resize.
ImageBuffer ResizeNearest(const ImageBuffer& src, int width, int height);

// Hex SHA-256 of the dimensions and pixel bytes.
std::string ContentHash(const ImageBuffer& image);

}  // namespace groundkit

#endif  // GROUNDKIT_CORE_IMAGE_H_
