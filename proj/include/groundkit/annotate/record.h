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

#ifndef GROUNDKIT_ANNOTATE_RECORD_H_
#define GROUNDKIT_ANNOTATE_RECORD_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "groundkit/core/box.h"

namespace groundkit {

enum class TaskType { kPick, kPlace };
enum class Arm { kLeft, kRight };

std::string_view TaskTypeName(TaskType t);
std::string_view ArmName(Arm a);
std::optional<TaskType> ParseTaskType(std::string_view s);
std::optional<Arm> ParseArm(std::string_view s);

struct LabeledBox {
  ThousandBox box_2d;
  std::string label;

  friend bool operator==(const LabeledBox&, const LabeledBox&) = default;
};

// Structured model output of the multiview annotation prompt. The
// verification text is stored once; its JSON key is object_verification for
// pick and container_verification for place.
struct AnnotationRecord {
  TaskType task_type = TaskType::kPick;
  Arm arm_used = Arm::kLeft;
  int key_frame_index = 0;
  std::vector<LabeledBox> bounding_boxes;
  std::string reasoning_step1;
  std::string reasoning_step2;
  std::string reasoning_step3;
  std::string verification;

  friend bool operator==(const AnnotationRecord&,
                         const AnnotationRecord&) = default;
};

std::string_view VerificationKey(TaskType t);

// Parses a raw model response. The first top-level JSON object in `text` is
// used; surrounding prose and markdown fences are ignored. Both the schema
// requested by the prompt ("bounding_boxes"/"box_2d") and the post-processed
// record shape ("bbox_results"/"original_box") are accepted.
//
// Error messages start with one of these tags:
//   "no json object found", "missing field <name>", "unknown task_type",
//   "unknown arm_used", "coordinate not integer", "coordinate out of range",
//   "box ordering", "key_frame_index out of range", "verification mismatch",
//   "no region returned", "bbox inconsistent".
// Every error carries the raw response as a payload (see RawResponseOf).
//
// When `num_frames` is set, key_frame_index must be below it.
absl::StatusOr<AnnotationRecord> ParseAnnotationResponse(
    std::string_view text, std::optional<int> num_frames = std::nullopt);

// Pretty JSON in schema field order. ParseAnnotationResponse inverts it.
std::string SerializeAnnotationRecord(const AnnotationRecord& record);

// Parses a point-to-box response: a JSON list of {"box_2d", "label"}. An
// empty list is an error tagged "no region returned".
absl::StatusOr<std::vector<LabeledBox>> ParseBoxListResponse(
    std::string_view text);

// Raw model text attached to a parse or transport error, if any.
std::optional<std::string> RawResponseOf(const absl::Status& status);
absl::Status AttachRawResponse(absl::Status status, std::string_view raw);

// Locates the first balanced JSON value opening with `open` ('{' or '[')
// that parses, skipping string contents when matching brackets.
std::optional<std::string> ExtractJsonValue(std::string_view text, char open);

}  // namespace groundkit

#endif  // GROUNDKIT_ANNOTATE_RECORD_H_
