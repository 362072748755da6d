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

#include "groundkit/annotate/prompts.h"

#include <cctype>
#include <map>
#include <string>

#include "absl/strings/str_cat.h"

namespace groundkit {

const std::string_view kAnnotationPromptTemplate = R"gkprompt(Task description: {task}

I am showing you a robotic manipulation task from three different camera views: 
High-view camera (0-{num_high-1}), Left wrist camera ({num_high}-{num_high+num_left-1}), and Right wrist camera.

Step 1: Determine Task Type (Pick vs Place) and Active Arm (Left vs Right).

Step 2: Identify the Key Moment.
For PICK: Find when gripper CLOSES. For PLACE: Find when gripper OPENS.
Determine the frame index in the sequence (0-based indexing).

Step 3: Locate the Target Object/Container in the Overhead View.
IMPORTANT: Use MULTIPLE frames to verify the object.
For PICK: Identify the specific object being grasped.
For PLACE: Identify the SPECIFIC CONTAINER/RECEPTACLE where the object is being placed.
[... Detailed criteria for valid container (must be distinct 3D object, not robot part, etc.) ...]

Important details for bounding box:
Coordinates 0-1000 [ymin, xmin, ymax, xmax]. Box should tightly fit target.

Output format (JSON):
{
  "task_type": "pick" or "place",
  "arm_used": "left" or "right",
  "reasoning_step1": "...",
  "key_frame_index": <frame index>,
  "reasoning_step2": "...",
  "bounding_boxes": [ { "box_2d": [ymin, xmin, ymax, xmax], "label": "..." } ],
  "reasoning_step3": "...",
  "container_verification": "For PLACE tasks ONLY: answer explicit verification questions (1-7)..."
}
Think step by step and follow the JSON schema exactly.)gkprompt";

const std::string_view kPointToBoxPromptTemplate = R"gkprompt(Please provide the bounding box coordinate of the region this sentence describes: {task}
The format should be as follows: [{"box_2d": [ymin, xmin, ymax, xmax], "label": <label for the object>}] normalized to 0-1000. The values in box_2d must only be integers.

Important:
- Identify the object that the hand is pointing to in the image
- Provide the bounding box coordinates in [ymin, xmin, ymax, xmax] format
- All coordinates should be integers normalized to 0-1000 range
- Include a descriptive label for the detected object
- Output must be valid JSON format)gkprompt";

std::string SubstitutePlaceholders(
    std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size() + 64);
  size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

absl::StatusOr<std::string> BuildAnnotationPrompt(std::string_view task_text,
                                                  int num_high, int num_left,
                                                  int num_right) {
  if (task_text.empty()) {
    return absl::InvalidArgumentError("task text required");
  }
  if (num_high < 1 || num_left < 1 || num_right < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("frame counts must be >= 1, got ", num_high, "/",
                     num_left, "/", num_right));
  }
  const std::map<std::string, std::string> values = {
      {"task", std::string(task_text)},
      {"num_high", absl::StrCat(num_high)},
      {"num_left", absl::StrCat(num_left)},
      {"num_right", absl::StrCat(num_right)},
      {"num_high-1", absl::StrCat(num_high - 1)},
      {"num_high+num_left-1", absl::StrCat(num_high + num_left - 1)},
      {"num_high+num_left", absl::StrCat(num_high + num_left)},
      {"num_high+num_left+num_right-1",
       absl::StrCat(num_high + num_left + num_right - 1)},
  };
  return SubstitutePlaceholders(kAnnotationPromptTemplate, values);
}

absl::StatusOr<std::string> BuildPointToBoxPrompt(std::string_view task_text) {
  if (task_text.empty()) {
    return absl::InvalidArgumentError("task text required");
  }
  return SubstitutePlaceholders(kPointToBoxPromptTemplate,
                                {{"task", std::string(task_text)}});
}

}  // namespace groundkit
