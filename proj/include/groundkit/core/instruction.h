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

#ifndef GROUNDKIT_CORE_INSTRUCTION_H_
#define GROUNDKIT_CORE_INSTRUCTION_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "groundkit/core/box.h"
#include "groundkit/core/image.h"

namespace groundkit {

enum class Modality { kTextOnly, kGrounded };

// How the grounding box reaches the policy.
enum class GroundingFormat {
  kBoxOverlay,  // Marker drawn on the first overhead frame (default).
  kObjectMask,  // Everything outside the box blacked out.
  kBoxText,     // Pixel coordinates appended to the instruction text.
};

// "overlay", "mask", "boxtext".
std::string_view GroundingFormatName(GroundingFormat format);
std::optional<GroundingFormat> ParseGroundingFormat(std::string_view name);

// Minimal high-level intent such as "pick up".
struct Instruction {
  std::string text;
  Modality modality = Modality::kTextOnly;

  absl::Status Validate() const;
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

// The instruction text paired with the grounded first overhead frame. The
// image is fixed for a whole episode.
struct GroundedInstruction {
  std::string text;
  ImageBuffer grounded_image;
  NormBox box;
  GroundingFormat format = GroundingFormat::kBoxOverlay;

  absl::Status Validate() const;
  friend bool operator==(const GroundedInstruction&,
                         const GroundedInstruction&) = default;
};

}  // namespace groundkit

#endif  // GROUNDKIT_CORE_INSTRUCTION_H_
