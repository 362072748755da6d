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

#include "groundkit/annotate/record.h"

#include <cmath>
#include <limits>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace groundkit {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr char kRawResponseUrl[] = "type.groundkit.dev/raw-response";

// Tolerance when checking a redundant normalized "bbox" against its integer
// source box; the normalized copy is usually printed with three decimals.
constexpr double kBboxConsistencyTol = 5e-4;

absl::Status Invalid(std::string msg) {
  return absl::InvalidArgumentError(std::move(msg));
}

absl::StatusOr<ThousandBox> ParseThousandBox(const json& j,
                                             std::string_view field) {
  if (!j.is_array() || j.size() != 4) {
    return Invalid(absl::StrCat("wrong type for field ", std::string(field),
                                ": expected four integers"));
  }
  int v[4];
  static constexpr const char* kNames[] = {"y_min", "x_min", "y_max",
                                           "x_max"};
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_number()) {
      return Invalid(absl::StrCat("coordinate not integer: ", kNames[i], "=",
                                  j[i].dump()));
    }
    if (!j[i].is_number_integer()) {
      return Invalid(absl::StrCat("coordinate not integer: ", kNames[i], "=",
                                  j[i].dump()));
    }
    const int64_t raw = j[i].is_number_unsigned()
                            ? static_cast<int64_t>(std::min<uint64_t>(
                                  j[i].get<uint64_t>(), 1u << 30))
                            : j[i].get<int64_t>();
    if (raw < 0 || raw > 1000) {
      return Invalid(absl::StrCat("coordinate out of range: ", kNames[i], "=",
                                  raw));
    }
    v[i] = static_cast<int>(raw);
  }
  ThousandBox box{v[0], v[1], v[2], v[3]};
  if (absl::Status s = box.Validate(); !s.ok()) return s;
  return box;
}

absl::StatusOr<LabeledBox> ParseLabeledBox(const json& j,
                                           const char* box_key) {
  if (!j.is_object()) return Invalid("wrong type for field box entry");
  if (!j.contains(box_key)) {
    return Invalid(absl::StrCat("missing field ", box_key));
  }
  LabeledBox out;
  auto box = ParseThousandBox(j[box_key], box_key);
  if (!box.ok()) return box.status();
  out.box_2d = *box;
  if (j.contains("label")) {
    if (!j["label"].is_string()) return Invalid("wrong type for field label");
    out.label = j["label"].get<std::string>();
  }
  return out;
}

absl::StatusOr<std::string> RequireString(const json& j, const char* key) {
  if (!j.contains(key)) return Invalid(absl::StrCat("missing field ", key));
  if (!j[key].is_string()) {
    return Invalid(absl::StrCat("wrong type for field ", key));
  }
  return j[key].get<std::string>();
}

absl::StatusOr<std::vector<LabeledBox>> ParseBoxes(const json& obj) {
  std::vector<LabeledBox> boxes;
  if (obj.contains("bounding_boxes")) {
    const json& list = obj["bounding_boxes"];
    if (!list.is_array()) return Invalid("wrong type for field bounding_boxes");
    for (const json& e : list) {
      auto b = ParseLabeledBox(e, "box_2d");
      if (!b.ok()) return b.status();
      boxes.push_back(*std::move(b));
    }
  } else if (obj.contains("bbox_results")) {
    const json& list = obj["bbox_results"];
    if (!list.is_array()) return Invalid("wrong type for field bbox_results");
    for (const json& e : list) {
      auto b = ParseLabeledBox(e, "original_box");
      if (!b.ok()) return b.status();
      if (e.contains("bbox")) {
        const json& nb = e["bbox"];
        auto expected = ThousandToNorm(b->box_2d);
        if (!expected.ok()) return expected.status();
        const double want[4] = {expected->x_min, expected->y_min,
                                expected->x_max, expected->y_max};
        if (!nb.is_array() || nb.size() != 4) {
          return Invalid("wrong type for field bbox");
        }
        for (int i = 0; i < 4; ++i) {
          if (!nb[i].is_number() ||
              std::abs(nb[i].get<double>() - want[i]) > kBboxConsistencyTol) {
            return Invalid(absl::StrCat("bbox inconsistent with original_box: ",
                                        nb.dump()));
          }
        }
      }
      boxes.push_back(*std::move(b));
    }
  } else {
    return Invalid("missing field bounding_boxes");
  }
  if (boxes.empty()) return Invalid("no region returned");
  return boxes;
}

absl::StatusOr<AnnotationRecord> ParseRecordObject(const json& obj,
                                                   std::optional<int> frames) {
  AnnotationRecord rec;
  auto task = RequireString(obj, "task_type");
  if (!task.ok()) return task.status();
  auto task_type = ParseTaskType(*task);
  if (!task_type) return Invalid(absl::StrCat("unknown task_type: ", *task));
  rec.task_type = *task_type;

  auto arm = RequireString(obj, "arm_used");
  if (!arm.ok()) return arm.status();
  auto arm_used = ParseArm(*arm);
  if (!arm_used) return Invalid(absl::StrCat("unknown arm_used: ", *arm));
  rec.arm_used = *arm_used;

  if (!obj.contains("key_frame_index")) {
    return Invalid("missing field key_frame_index");
  }
  const json& kf = obj["key_frame_index"];
  if (!kf.is_number_integer()) {
    return Invalid("wrong type for field key_frame_index");
  }
  const int64_t key = kf.is_number_unsigned()
                          ? static_cast<int64_t>(std::min<uint64_t>(
                                kf.get<uint64_t>(), 1u << 30))
                          : kf.get<int64_t>();
  if (key < 0 || key > std::numeric_limits<int>::max() ||
      (frames && key >= *frames)) {
    return Invalid(absl::StrCat("key_frame_index out of range: ", key));
  }
  rec.key_frame_index = static_cast<int>(key);

  auto boxes = ParseBoxes(obj);
  if (!boxes.ok()) return boxes.status();
  rec.bounding_boxes = *std::move(boxes);

  for (auto [key_name, dst] :
       {std::pair{"reasoning_step1", &rec.reasoning_step1},
        std::pair{"reasoning_step2", &rec.reasoning_step2},
        std::pair{"reasoning_step3", &rec.reasoning_step3}}) {
    auto s = RequireString(obj, key_name);
    if (!s.ok()) return s.status();
    *dst = *std::move(s);
  }

  const std::string want(VerificationKey(rec.task_type));
  const std::string other(VerificationKey(
      rec.task_type == TaskType::kPick ? TaskType::kPlace : TaskType::kPick));
  if (obj.contains(other)) {
    return Invalid(absl::StrCat("verification mismatch: ", other,
                                " present for task_type ", *task));
  }
  auto verification = RequireString(obj, want.c_str());
  if (!verification.ok()) return verification.status();
  rec.verification = *std::move(verification);
  return rec;
}

}  // namespace

std::string_view TaskTypeName(TaskType t) {
  return t == TaskType::kPick ? "pick" : "place";
}

std::string_view ArmName(Arm a) { return a == Arm::kLeft ? "left" : "right"; }

std::optional<TaskType> ParseTaskType(std::string_view s) {
  if (s == "pick") return TaskType::kPick;
  if (s == "place") return TaskType::kPlace;
  return std::nullopt;
}

std::optional<Arm> ParseArm(std::string_view s) {
  if (s == "left") return Arm::kLeft;
  if (s == "right") return Arm::kRight;
  return std::nullopt;
}

std::string_view VerificationKey(TaskType t) {
  return t == TaskType::kPick ? "object_verification"
                              : "container_verification";
}

std::optional<std::string> ExtractJsonValue(std::string_view text, char open) {
  for (size_t start = text.find(open); start != std::string_view::npos;
       start = text.find(open, start + 1)) {
    std::string stack;
    bool in_string = false;
    bool escaped = false;
    size_t end = std::string_view::npos;
    for (size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{' || c == '[') {
        stack.push_back(c == '{' ? '}' : ']');
      } else if (c == '}' || c == ']') {
        if (stack.empty() || stack.back() != c) break;
        stack.pop_back();
        if (stack.empty()) {
          end = i + 1;
          break;
        }
      }
    }
    if (end == std::string_view::npos) continue;
    const std::string candidate(text.substr(start, end - start));
    if (json::accept(candidate)) return candidate;
  }
  return std::nullopt;
}

absl::Status AttachRawResponse(absl::Status status, std::string_view raw) {
  if (!status.ok()) {
    status.SetPayload(kRawResponseUrl, absl::Cord(std::string(raw)));
  }
  return status;
}

std::optional<std::string> RawResponseOf(const absl::Status& status) {
  auto payload = status.GetPayload(kRawResponseUrl);
  if (!payload) return std::nullopt;
  return std::string(*payload);
}

absl::StatusOr<AnnotationRecord> ParseAnnotationResponse(
    std::string_view text, std::optional<int> num_frames) {
  std::optional<std::string> body = ExtractJsonValue(text, '{');
  if (!body) return AttachRawResponse(Invalid("no json object found"), text);
  auto rec = ParseRecordObject(json::parse(*body), num_frames);
  if (!rec.ok()) return AttachRawResponse(rec.status(), text);
  return rec;
}

std::string SerializeAnnotationRecord(const AnnotationRecord& record) {
  ordered_json j;
  j["task_type"] = std::string(TaskTypeName(record.task_type));
  j["arm_used"] = std::string(ArmName(record.arm_used));
  j["reasoning_step1"] = record.reasoning_step1;
  j["key_frame_index"] = record.key_frame_index;
  j["reasoning_step2"] = record.reasoning_step2;
  ordered_json boxes = ordered_json::array();
  for (const LabeledBox& b : record.bounding_boxes) {
    ordered_json e;
    e["box_2d"] = {b.box_2d.y_min, b.box_2d.x_min, b.box_2d.y_max,
                   b.box_2d.x_max};
    e["label"] = b.label;
    boxes.push_back(std::move(e));
  }
  j["bounding_boxes"] = std::move(boxes);
  j["reasoning_step3"] = record.reasoning_step3;
  j[std::string(VerificationKey(record.task_type))] = record.verification;
  return j.dump(2);
}

absl::StatusOr<std::vector<LabeledBox>> ParseBoxListResponse(
    std::string_view text) {
  // A bare object is accepted as a one-element list; whichever JSON value
  // starts first wins so a lone object's inner box array is not mistaken
  // for the list.
  const std::optional<std::string> arr = ExtractJsonValue(text, '[');
  const std::optional<std::string> obj = ExtractJsonValue(text, '{');
  json list;
  if (arr && (!obj || text.find(*arr) <= text.find(*obj))) {
    list = json::parse(*arr);
  } else if (obj) {
    list = json::array({json::parse(*obj)});
  } else {
    return AttachRawResponse(Invalid("no json object found"), text);
  }
  std::vector<LabeledBox> boxes;
  for (const json& e : list) {
    auto b = ParseLabeledBox(e, "box_2d");
    if (!b.ok()) return AttachRawResponse(b.status(), text);
    boxes.push_back(*std::move(b));
  }
  if (boxes.empty()) {
    return AttachRawResponse(Invalid("no region returned"), text);
  }
  return boxes;
}

}  // namespace groundkit
