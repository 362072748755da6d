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

#ifndef GROUNDKIT_CORE_BOX_H_
#define GROUNDKIT_CORE_BOX_H_

#include <cstdint>
#include <ostream>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace groundkit {

// Box on the 0-1000 integer grid, in the wire order emitted by multimodal
// models: [ymin, xmin, ymax, xmax]. Only exists at the annotation boundary.
struct ThousandBox {
  int y_min = 0;
  int x_min = 0;
  int y_max = 0;
  int x_max = 0;

  absl::Status Validate() const;
  friend bool operator==(const ThousandBox&, const ThousandBox&) = default;
};

// Normalized box in canonical (x_min, y_min, x_max, y_max) order. Fractions
// of the image width/height.
struct NormBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;

  absl::Status Validate() const;
  double CenterX() const { return 0.5 * (x_min + x_max); }
  double CenterY() const { return 0.5 * (y_min + y_max); }
  friend bool operator==(const NormBox&, const NormBox&) = default;
};

// Half-open pixel box [min, max).
struct PixelBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int Width() const { return x_max - x_min; }
  int Height() const { return y_max - y_min; }
  int64_t Area() const {
    return static_cast<int64_t>(Width()) * static_cast<int64_t>(Height());
  }
  bool Contains(int x, int y) const {
    return x >= x_min && x < x_max && y >= y_min && y < y_max;
  }
  // Non-degenerate and inside a width x height image.
  absl::Status Validate(int width, int height) const;
  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

std::ostream& operator<<(std::ostream& os, const ThousandBox& b);
std::ostream& operator<<(std::ostream& os, const NormBox& b);
std::ostream& operator<<(std::ostream& os, const PixelBox& b);

// Reorders wire [ymin, xmin, ymax, xmax] to canonical order and divides by
// 1000. The division is exact-then-rounded, so 411 maps to the double
// nearest 0.411.
absl::StatusOr<NormBox> ThousandToNorm(const ThousandBox& box);

// Inverse at the wire boundary: rounds each coordinate to the 0-1000 grid.
// Fails if the rounded box degenerates.
absl::StatusOr<ThousandBox> NormToThousand(const NormBox& box);

// floor() for min edges and ceil() for max edges, clamped to the image.
// Products within 1e-9 of an integer snap to it first, which makes
// PixelToNorm followed by NormToPixel exact. A box that rounds to zero width
// or height grows its max edge by one pixel (or its min edge, at the border).
PixelBox NormToPixel(const NormBox& box, int width, int height);

absl::StatusOr<NormBox> PixelToNorm(const PixelBox& box, int width,
                                    int height);

// Intersection over union of two half-open boxes. 0 when either is empty.
double BoxIou(const PixelBox& a, const PixelBox& b);

// Clips to [0, width) x [0, height). The result may be empty.
PixelBox ClipToImage(const PixelBox& box, int width, int height);

PixelBox Translate(const PixelBox& box, int dx, int dy);

}  // namespace groundkit

#endif  // GROUNDKIT_CORE_BOX_H_
