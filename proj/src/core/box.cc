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

#include "groundkit/core/box.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace groundkit {
namespace {

constexpr double kSnapEpsilon = 1e-9;

absl::Status RangeError(const char* field, double value, double lo,
                        double hi) {
  return absl::InvalidArgumentError(absl::StrCat(
      "coordinate out of range: ", field, "=", value, " not in [", lo, ", ",
      hi, "]"));
}

absl::Status OrderingError(const char* lo_field, double lo, const char* hi_field,
                           double hi) {
  return absl::InvalidArgumentError(absl::StrCat(
      "box ordering: ", lo_field, "=", lo, " must be < ", hi_field, "=", hi));
}

double Snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= kSnapEpsilon * std::max(1.0, std::abs(v)) ? r : v;
}

// Maps [lo, hi) fractions onto [0, extent) integer edges.
void ScaleEdges(double lo, double hi, int extent, int& out_lo, int& out_hi) {
  int a = static_cast<int>(std::floor(Snap(lo * extent)));
  int b = static_cast<int>(std::ceil(Snap(hi * extent)));
  a = std::clamp(a, 0, extent);
  b = std::clamp(b, 0, extent);
  if (a >= b) {
    b = a + 1;
    if (b > extent) {
      b = extent;
      a = extent - 1;
    }
  }
  out_lo = a;
  out_hi = b;
}

}  // namespace

absl::Status ThousandBox::Validate() const {
  const std::pair<const char*, int> fields[] = {
      {"y_min", y_min}, {"x_min", x_min}, {"y_max", y_max}, {"x_max", x_max}};
  for (const auto& [name, v] : fields) {
    if (v < 0 || v > 1000) return RangeError(name, v, 0, 1000);
  }
  if (y_min >= y_max) return OrderingError("y_min", y_min, "y_max", y_max);
  if (x_min >= x_max) return OrderingError("x_min", x_min, "x_max", x_max);
  return absl::OkStatus();
}

absl::Status NormBox::Validate() const {
  const std::pair<const char*, double> fields[] = {
      {"x_min", x_min}, {"y_min", y_min}, {"x_max", x_max}, {"y_max", y_max}};
  for (const auto& [name, v] : fields) {
    if (!(v >= 0.0 && v <= 1.0)) return RangeError(name, v, 0, 1);
  }
  if (!(x_min < x_max)) return OrderingError("x_min", x_min, "x_max", x_max);
  if (!(y_min < y_max)) return OrderingError("y_min", y_min, "y_max", y_max);
  return absl::OkStatus();
}

absl::Status PixelBox::Validate(int width, int height) const {
  if (x_min < 0) return RangeError("x_min", x_min, 0, width);
  if (y_min < 0) return RangeError("y_min", y_min, 0, height);
  if (x_max > width) return RangeError("x_max", x_max, 0, width);
  if (y_max > height) return RangeError("y_max", y_max, 0, height);
  if (x_min >= x_max) return OrderingError("x_min", x_min, "x_max", x_max);
  if (y_min >= y_max) return OrderingError("y_min", y_min, "y_max", y_max);
  return absl::OkStatus();
}

std::ostream& operator<<(std::ostream& os, const ThousandBox& b) {
  return os << "[" << b.y_min << ", " << b.x_min << ", " << b.y_max << ", "
            << b.x_max << "]";
}

std::ostream& operator<<(std::ostream& os, const NormBox& b) {
  return os << "NormBox(" << b.x_min << ", " << b.y_min << ", " << b.x_max
            << ", " << b.y_max << ")";
}

std::ostream& operator<<(std::ostream& os, const PixelBox& b) {
  return os << "PixelBox(" << b.x_min << ", " << b.y_min << ", " << b.x_max
            << ", " << b.y_max << ")";
}

absl::StatusOr<NormBox> ThousandToNorm(const ThousandBox& box) {
  if (absl::Status s = box.Validate(); !s.ok()) return s;
  return NormBox{box.x_min / 1000.0, box.y_min / 1000.0, box.x_max / 1000.0,
                 box.y_max / 1000.0};
}

absl::StatusOr<ThousandBox> NormToThousand(const NormBox& box) {
  if (absl::Status s = box.Validate(); !s.ok()) return s;
  auto q = [](double v) { return static_cast<int>(std::lround(v * 1000.0)); };
  ThousandBox out{q(box.y_min), q(box.x_min), q(box.y_max), q(box.x_max)};
  if (absl::Status s = out.Validate(); !s.ok()) return s;
  return out;
}

PixelBox NormToPixel(const NormBox& box, int width, int height) {
  PixelBox out;
  ScaleEdges(box.x_min, box.x_max, width, out.x_min, out.x_max);
  ScaleEdges(box.y_min, box.y_max, height, out.y_min, out.y_max);
  return out;
}

absl::StatusOr<NormBox> PixelToNorm(const PixelBox& box, int width,
                                    int height) {
  if (width < 1 || height < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: image is ", width, "x", height));
  }
  if (absl::Status s = box.Validate(width, height); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: ", s.message()));
  }
  const double w = width;
  const double h = height;
  return NormBox{box.x_min / w, box.y_min / h, box.x_max / w, box.y_max / h};
}

double BoxIou(const PixelBox& a, const PixelBox& b) {
  const int64_t ix =
      std::max(0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const int64_t iy =
      std::max(0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const int64_t inter = ix * iy;
  const int64_t uni = std::max<int64_t>(a.Area(), 0) +
                      std::max<int64_t>(b.Area(), 0) - inter;
  if (inter == 0 || uni <= 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

PixelBox ClipToImage(const PixelBox& box, int width, int height) {
  return PixelBox{std::clamp(box.x_min, 0, width),
                  std::clamp(box.y_min, 0, height),
                  std::clamp(box.x_max, 0, width),
                  std::clamp(box.y_max, 0, height)};
}

PixelBox Translate(const PixelBox& box, int dx, int dy) {
  return PixelBox{box.x_min + dx, box.y_min + dy, box.x_max + dx,
                  box.y_max + dy};
}

}  // namespace groundkit
