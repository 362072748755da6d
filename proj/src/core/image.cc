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

#include "groundkit/core/image.h"

#include <cassert>
#include <utility>

#include "absl/strings/str_cat.h"
#include "groundkit/core/hash.h"

namespace groundkit {

ImageBuffer::ImageBuffer(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  assert(width >= 1 && height >= 1);
  pixels_.resize(static_cast<size_t>(width) * static_cast<size_t>(height) * 3);
  for (size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

absl::StatusOr<ImageBuffer> ImageBuffer::FromPixels(
    int width, int height, std::vector<uint8_t> pixels) {
  if (width < 1 || height < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("image dimensions must be positive, got ", width, "x",
                     height));
  }
  const size_t expected =
      static_cast<size_t>(width) * static_cast<size_t>(height) * 3;
  if (pixels.size() != expected) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pixel buffer has ", pixels.size(), " bytes, expected ", expected));
  }
  ImageBuffer image;
  image.width_ = width;
  image.height_ = height;
  image.pixels_ = std::move(pixels);
  return image;
}

int64_t CountChangedPixels(const ImageBuffer& a, const ImageBuffer& b) {
  assert(a.width() == b.width() && a.height() == b.height());
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  int64_t changed = 0;
  for (size_t i = 0; i < pa.size(); i += 3) {
    if (pa[i] != pb[i] || pa[i + 1] != pb[i + 1] || pa[i + 2] != pb[i + 2]) {
      ++changed;
    }
  }
  return changed;
}

ImageBuffer ResizeNearest(const ImageBuffer& src, int width, int height) {
  ImageBuffer out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = static_cast<int>(static_cast<int64_t>(y) * src.height() /
                                    height);
    for (int x = 0; x < width; ++x) {
      const int sx = static_cast<int>(static_cast<int64_t>(x) * src.width() /
                                      width);
      out.Set(x, y, src.At(sx, sy));
    }
  }
  return out;
}

std::string ContentHash(const ImageBuffer& image) {
  Sha256 h;
  h.Update(absl::StrCat(image.width(), "x", image.height(), ":"));
  h.Update(image.pixels());
  return h.HexDigest();
}

}  // namespace groundkit
