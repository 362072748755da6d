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

#include "groundkit/core/instruction.h"

namespace groundkit {

std::string_view GroundingFormatName(GroundingFormat format) {
  switch (format) {
    case GroundingFormat::kBoxOverlay:
      return "overlay";
    case GroundingFormat::kObjectMask:
      return "mask";
    case GroundingFormat::kBoxText:
      return "boxtext";
  }
  return "overlay";
}

std::optional<GroundingFormat> ParseGroundingFormat(std::string_view name) {
  if (name == "overlay") return GroundingFormat::kBoxOverlay;
  if (name == "mask") return GroundingFormat::kObjectMask;
  if (name == "boxtext") return GroundingFormat::kBoxText;
  return std::nullopt;
}

absl::Status Instruction::Validate() const {
  if (text.empty()) return absl::InvalidArgumentError("instruction text is empty");
  return absl::OkStatus();
}

absl::Status GroundedInstruction::Validate() const {
  if (grounded_image.empty()) {
    return absl::InvalidArgumentError("grounded image is empty");
  }
  return box.Validate();
}

}  // namespace groundkit
