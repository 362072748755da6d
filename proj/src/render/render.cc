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

#include "groundkit/render/render.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace groundkit {

OverlayStyle DefaultOverlayStyle(int width, int height) {
  OverlayStyle style;
  style.thickness = std::max(
      2, static_cast<int>(std::lround(0.004 * std::max(width, height))));
  return style;
}

ImageBuffer RenderOverlay(const ImageBuffer& image, const PixelBox& box,
                          const OverlayStyle& style) {
  ImageBuffer out = image;
  const PixelBox b = ClipToImage(box, image.width(), image.height());
  const int t = std::max(1, style.thickness);
  for (int y = b.y_min; y < b.y_max; ++y) {
    const bool row_band = y < b.y_min + t || y >= b.y_max - t;
    for (int x = b.x_min; x < b.x_max; ++x) {
      if (row_band || x < b.x_min + t || x >= b.x_max - t) {
        out.Set(x, y, style.color);
      }
    }
  }
  return out;
}

ImageBuffer RenderOverlay(const ImageBuffer& image, const NormBox& box,
                          const OverlayStyle& style) {
  return RenderOverlay(image, NormToPixel(box, image.width(), image.height()),
                       style);
}

ImageBuffer RenderMask(const ImageBuffer& image, const PixelBox& box) {
  ImageBuffer out(image.width(), image.height(), Rgb{0, 0, 0});
  const PixelBox b = ClipToImage(box, image.width(), image.height());
  for (int y = b.y_min; y < b.y_max; ++y) {
    for (int x = b.x_min; x < b.x_max; ++x) out.Set(x, y, image.At(x, y));
  }
  return out;
}

ImageBuffer RenderMask(const ImageBuffer& image, const NormBox& box) {
  return RenderMask(image, NormToPixel(box, image.width(), image.height()));
}

std::string RenderBoxText(std::string_view instruction_text,
                          const NormBox& box, int width, int height) {
  const PixelBox p = NormToPixel(box, width, height);
  return absl::StrCat(std::string(instruction_text), " x1=", p.x_min,
                      ", y1=", p.y_min, ", x2=", p.x_max, ", y2=", p.y_max);
}

absl::StatusOr<PixelBox> DetectOverlay(const ImageBuffer& image,
                                       const OverlayStyle& style) {
  int x_min = image.width();
  int y_min = image.height();
  int x_max = -1;
  int y_max = -1;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (image.At(x, y) == style.color) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (x_max < 0) return absl::NotFoundError("marker not found");
  return PixelBox{x_min, y_min, x_max + 1, y_max + 1};
}

int64_t ReserveMarkerColor(ImageBuffer& image, Rgb marker) {
  Rgb replacement = marker;
  if (replacement.r > 0) {
    --replacement.r;
  } else {
    ++replacement.r;
  }
  int64_t changed = 0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (image.At(x, y) == marker) {
        image.Set(x, y, replacement);
        ++changed;
      }
    }
  }
  return changed;
}

GroundedInstruction MakeGroundedInstruction(const ImageBuffer& image,
                                            const NormBox& box,
                                            std::string_view text,
                                            GroundingFormat format,
                                            const OverlayStyle& style) {
  GroundedInstruction gi;
  gi.box = box;
  gi.format = format;
  switch (format) {
    case GroundingFormat::kBoxOverlay:
      gi.text = std::string(text);
      gi.grounded_image = RenderOverlay(image, box, style);
      break;
    case GroundingFormat::kObjectMask:
      gi.text = std::string(text);
      gi.grounded_image = RenderMask(image, box);
      break;
    case GroundingFormat::kBoxText:
      gi.text = RenderBoxText(text, box, image.width(), image.height());
      gi.grounded_image = image;
      break;
  }
  return gi;
}

}  // namespace groundkit
