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

#ifndef GROUNDKIT_RENDER_RENDER_H_
#define GROUNDKIT_RENDER_RENDER_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "groundkit/core/box.h"
#include "groundkit/core/image.h"
#include "groundkit/core/instruction.h"

namespace groundkit {

// Pure red. Scene content never uses it, so DetectOverlay stays exact.
inline constexpr Rgb kMarkerColor{255, 0, 0};

struct OverlayStyle {
  Rgb color = kMarkerColor;
  int thickness = 2;
};

// Marker color with thickness max(2, round(0.004 * max(width, height))).
OverlayStyle DefaultOverlayStyle(int width, int height);

// Sets the band of `style.thickness` pixels just inside the pixel box to the
// marker color. Everything else is copied byte for byte. Boxes thinner than
// twice the band are filled.
ImageBuffer RenderOverlay(const ImageBuffer& image, const NormBox& box,
                          const OverlayStyle& style);
ImageBuffer RenderOverlay(const ImageBuffer& image, const PixelBox& box,
                          const OverlayStyle& style);

// Keeps the pixel box, blacks out the rest.
ImageBuffer RenderMask(const ImageBuffer& image, const NormBox& box);
ImageBuffer RenderMask(const ImageBuffer& image, const PixelBox& box);

// "<text> x1=<X1>, y1=<Y1>, x2=<X2>, y2=<Y2>" in pixel coordinates.
std::string RenderBoxText(std::string_view instruction_text,
                          const NormBox& box, int width, int height);

// Tight box around every pixel exactly equal to `style.color`.
absl::StatusOr<PixelBox> DetectOverlay(const ImageBuffer& image,
                                       const OverlayStyle& style);

// Nudges pixels that collide with the marker color ((255,0,0) becomes
// (254,0,0)). Returns the number of pixels changed.
int64_t ReserveMarkerColor(ImageBuffer& image, Rgb marker = kMarkerColor);

// Builds the grounded instruction for any of the three formats. For kBoxText
// the image is returned unmarked and the coordinates go into the text.
GroundedInstruction MakeGroundedInstruction(const ImageBuffer& image,
                                            const NormBox& box,
                                            std::string_view text,
                                            GroundingFormat format,
                                            const OverlayStyle& style);

}  // namespace groundkit

#endif  // GROUNDKIT_RENDER_RENDER_H_
