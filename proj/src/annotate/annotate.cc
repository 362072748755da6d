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

#include "groundkit/annotate/annotate.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <thread>

#include "absl/strings/str_cat.h"
#include "groundkit/annotate/prompts.h"
#include "groundkit/core/hash.h"
#include "groundkit/core/image_io.h"
#include "groundkit/core/status_macros.h"
#include "json.hpp"

namespace groundkit {
namespace {

using ordered_json = nlohmann::ordered_json;

// Prefixes the message and keeps any attached raw response.
absl::Status Prefixed(const absl::Status& s, const std::string& prefix) {
  absl::Status out(s.code(), absl::StrCat(prefix, s.message()));
  if (auto raw = RawResponseOf(s)) out = AttachRawResponse(out, *raw);
  return out;
}

std::optional<TaskType> TaskTypeFromText(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  const bool pick = lower.find("pick") != std::string::npos;
  const bool place = lower.find("place") != std::string::npos ||
                     lower.find("put ") != std::string::npos;
  if (pick == place) return std::nullopt;
  return pick ? TaskType::kPick : TaskType::kPlace;
}

ordered_json BoxesJson(const std::vector<LabeledBox>& boxes) {
  ordered_json out = ordered_json::array();
  for (const LabeledBox& b : boxes) {
    out.push_back({{"box_2d",
                    {b.box_2d.y_min, b.box_2d.x_min, b.box_2d.y_max,
                     b.box_2d.x_max}},
                   {"label", b.label}});
  }
  return out;
}

std::vector<LabeledBox> BoxesFromJson(const ordered_json& j) {
  std::vector<LabeledBox> out;
  for (const auto& e : j) {
    const auto& b = e.at("box_2d");
    out.push_back({ThousandBox{b.at(0).get<int>(), b.at(1).get<int>(),
                               b.at(2).get<int>(), b.at(3).get<int>()},
                   e.at("label").get<std::string>()});
  }
  return out;
}

}  // namespace

absl::StatusOr<SampledViews> SampleViews(const Episode& episode, int frames) {
  SampledViews v;
  struct Slot {
    CameraRole role;
    std::vector<ImageBuffer>* images;
    std::vector<int>* indices;
  };
  for (const Slot& s : {Slot{CameraRole::kHigh, &v.high, &v.high_indices},
                        Slot{CameraRole::kLeftWrist, &v.left, &v.left_indices},
                        Slot{CameraRole::kRightWrist, &v.right,
                             &v.right_indices}}) {
    GK_ASSIGN_OR_RETURN(FrameSample sample,
                        SampleUniform(episode, s.role, frames));
    GK_ASSIGN_OR_RETURN(*s.images, LoadFrames(episode, sample));
    *s.indices = sample.indices;
  }
  return v;
}

absl::StatusOr<GroundedLabel> AnnotateViews(const std::string& episode_id,
                                            const std::string& task_text,
                                            const SampledViews& views,
                                            ModelClient& client,
                                            const AnnotateOptions& options) {
  const int nh = static_cast<int>(views.high.size());
  const int nl = static_cast<int>(views.left.size());
  const int nr = static_cast<int>(views.right.size());
  GK_ASSIGN_OR_RETURN(std::string prompt,
                      BuildAnnotationPrompt(task_text, nh, nl, nr));

  std::vector<ImageBuffer> images;
  images.reserve(nh + nl + nr);
  images.insert(images.end(), views.high.begin(), views.high.end());
  images.insert(images.end(), views.left.begin(), views.left.end());
  images.insert(images.end(), views.right.begin(), views.right.end());

  absl::StatusOr<std::string> response = client.Request(images, prompt);
  if (!response.ok()) {
    return Prefixed(response.status(),
                    absl::StrCat("model request failed for episode ",
                                 episode_id, ": "));
  }
  absl::StatusOr<AnnotationRecord> record =
      ParseAnnotationResponse(*response, nh + nl + nr);
  if (!record.ok()) {
    return Prefixed(record.status(), absl::StrCat("episode ", episode_id, ": "));
  }

  GroundedLabel label;
  label.episode_id = episode_id;
  label.segment_id = options.segment_id;
  const LabeledBox& first = record->bounding_boxes.front();
  GK_ASSIGN_OR_RETURN(label.box, ThousandToNorm(first.box_2d));
  label.label = first.label;
  label.task_type = record->task_type;
  label.arm_used = record->arm_used;
  label.key_frame_index = record->key_frame_index;
  if (options.propagate_to_first_frame) {
    label.frame_index = 0;
  } else {
    int pos = record->key_frame_index;
    if (pos >= nh + nl) {
      pos -= nh + nl;
    } else if (pos >= nh) {
      pos -= nh;
    }
    pos = std::min(pos, nh - 1);
    label.frame_index = views.high_indices[pos];
  }

  LabelProvenance& p = label.provenance;
  p.model = client.Describe();
  p.prompt_sha256 = Sha256Hex(prompt);
  p.raw_response = *response;
  p.task_text = task_text;
  p.reasoning_step1 = record->reasoning_step1;
  p.reasoning_step2 = record->reasoning_step2;
  p.reasoning_step3 = record->reasoning_step3;
  p.verification = record->verification;
  p.extra_boxes.assign(record->bounding_boxes.begin() + 1,
                       record->bounding_boxes.end());
  const std::optional<TaskType> expected = TaskTypeFromText(task_text);
  p.task_type_mismatch = expected && *expected != record->task_type;
  p.sampled_high = views.high_indices;
  p.sampled_left = views.left_indices;
  p.sampled_right = views.right_indices;
  return label;
}

absl::StatusOr<GroundedLabel> AnnotateEpisode(const Episode& episode,
                                              ModelClient& client,
                                              const AnnotateOptions& options) {
  GK_ASSIGN_OR_RETURN(SampledViews views, SampleViews(episode, options.frames));
  return AnnotateViews(episode.episode_id, episode.task_text, views, client,
                       options);
}

std::vector<absl::StatusOr<GroundedLabel>> AnnotateAll(
    const std::vector<Episode>& episodes, ModelClient& client,
    const AnnotateOptions& options, int max_in_flight) {
  std::vector<absl::StatusOr<GroundedLabel>> results(
      episodes.size(), absl::UnknownError("not run"));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < episodes.size(); i = next++) {
      results[i] = AnnotateEpisode(episodes[i], client, options);
    }
  };
  const int workers = std::clamp<int>(
      max_in_flight, 1, std::max<int>(1, static_cast<int>(episodes.size())));
  std::vector<std::thread> threads;
  for (int i = 1; i < workers; ++i) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  return results;
}

std::string LabelToJson(const GroundedLabel& l) {
  ordered_json j;
  j["episode_id"] = l.episode_id;
  j["segment_id"] = l.segment_id;
  j["box"] = {l.box.x_min, l.box.y_min, l.box.x_max, l.box.y_max};
  j["label"] = l.label;
  j["task_type"] = std::string(TaskTypeName(l.task_type));
  j["arm_used"] = std::string(ArmName(l.arm_used));
  j["key_frame_index"] = l.key_frame_index;
  j["frame_index"] = l.frame_index;
  const LabelProvenance& p = l.provenance;
  ordered_json pj;
  pj["model"] = p.model;
  pj["prompt_sha256"] = p.prompt_sha256;
  pj["task_text"] = p.task_text;
  pj["task_type_mismatch"] = p.task_type_mismatch;
  pj["reasoning_step1"] = p.reasoning_step1;
  pj["reasoning_step2"] = p.reasoning_step2;
  pj["reasoning_step3"] = p.reasoning_step3;
  pj["verification"] = p.verification;
  pj["extra_boxes"] = BoxesJson(p.extra_boxes);
  pj["sampled_frames"] = {{"high", p.sampled_high},
                          {"left_wrist", p.sampled_left},
                          {"right_wrist", p.sampled_right}};
  pj["raw_response"] = p.raw_response;
  j["provenance"] = std::move(pj);
  return j.dump(2) + "\n";
}

absl::StatusOr<GroundedLabel> LabelFromJson(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError("label: bad JSON");
  GroundedLabel l;
  try {
    l.episode_id = j.at("episode_id").get<std::string>();
    l.segment_id = j.at("segment_id").get<int>();
    const auto& b = j.at("box");
    l.box = NormBox{b.at(0).get<double>(), b.at(1).get<double>(),
                    b.at(2).get<double>(), b.at(3).get<double>()};
    l.label = j.at("label").get<std::string>();
    auto task = ParseTaskType(j.at("task_type").get<std::string>());
    auto arm = ParseArm(j.at("arm_used").get<std::string>());
    if (!task || !arm) {
      return absl::InvalidArgumentError("label: bad task_type or arm_used");
    }
    l.task_type = *task;
    l.arm_used = *arm;
    l.key_frame_index = j.at("key_frame_index").get<int>();
    l.frame_index = j.at("frame_index").get<int>();
    const auto& pj = j.at("provenance");
    LabelProvenance& p = l.provenance;
    p.model = pj.at("model").get<std::string>();
    p.prompt_sha256 = pj.at("prompt_sha256").get<std::string>();
    p.task_text = pj.at("task_text").get<std::string>();
    p.task_type_mismatch = pj.at("task_type_mismatch").get<bool>();
    p.reasoning_step1 = pj.at("reasoning_step1").get<std::string>();
    p.reasoning_step2 = pj.at("reasoning_step2").get<std::string>();
    p.reasoning_step3 = pj.at("reasoning_step3").get<std::string>();
    p.verification = pj.at("verification").get<std::string>();
    p.extra_boxes = BoxesFromJson(pj.at("extra_boxes"));
    const auto& sf = pj.at("sampled_frames");
    p.sampled_high = sf.at("high").get<std::vector<int>>();
    p.sampled_left = sf.at("left_wrist").get<std::vector<int>>();
    p.sampled_right = sf.at("right_wrist").get<std::vector<int>>();
    p.raw_response = pj.at("raw_response").get<std::string>();
  } catch (const ordered_json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("label: ", e.what()));
  }
  GK_RETURN_IF_ERROR(l.box.Validate());
  return l;
}

std::filesystem::path LabelPath(const std::filesystem::path& root,
                                const std::string& episode_id,
                                int segment_id) {
  return root / "labels" / absl::StrCat(episode_id, ".", segment_id, ".json");
}

absl::Status WriteLabel(const std::filesystem::path& root,
                        const GroundedLabel& label) {
  return WriteFileBytes(LabelPath(root, label.episode_id, label.segment_id),
                        LabelToJson(label));
}

absl::StatusOr<GroundedLabel> ReadLabel(const std::filesystem::path& path) {
  GK_ASSIGN_OR_RETURN(std::string text, ReadFileBytes(path));
  return LabelFromJson(text);
}

absl::StatusOr<GroundedLabel> AnnotateEpisodeToStore(
    const Episode& episode, ModelClient& client,
    const AnnotateOptions& options, const std::filesystem::path& root) {
  GK_ASSIGN_OR_RETURN(GroundedLabel label,
                      AnnotateEpisode(episode, client, options));
  GK_RETURN_IF_ERROR(WriteLabel(root, label));
  return label;
}

absl::StatusOr<PointToBoxResult> PointToBox(const ImageBuffer& image,
                                            const std::string& task_text,
                                            ModelClient& client) {
  GK_ASSIGN_OR_RETURN(std::string prompt, BuildPointToBoxPrompt(task_text));
  absl::StatusOr<std::string> response = client.Request({image}, prompt);
  if (!response.ok()) {
    return Prefixed(response.status(), "model request failed: ");
  }
  GK_ASSIGN_OR_RETURN(std::vector<LabeledBox> boxes,
                      ParseBoxListResponse(*response));
  PointToBoxResult out;
  GK_ASSIGN_OR_RETURN(out.box, ThousandToNorm(boxes.front().box_2d));
  out.label = boxes.front().label;
  out.region_count = static_cast<int>(boxes.size());
  out.extra_boxes.assign(boxes.begin() + 1, boxes.end());
  out.raw_response = *response;
  return out;
}

}  // namespace groundkit
