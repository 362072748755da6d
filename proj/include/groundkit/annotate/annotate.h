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

#ifndef GROUNDKIT_ANNOTATE_ANNOTATE_H_
#define GROUNDKIT_ANNOTATE_ANNOTATE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "groundkit/annotate/client.h"
#include "groundkit/annotate/record.h"
#include "groundkit/core/box.h"
#include "groundkit/core/image.h"
#include "groundkit/ingest/episode.h"

namespace groundkit {

// Audit trail kept next to every label.
struct LabelProvenance {
  std::string model;            // ModelClient::Describe().
  std::string prompt_sha256;
  std::string raw_response;
  std::string task_text;
  std::string reasoning_step1;
  std::string reasoning_step2;
  std::string reasoning_step3;
  std::string verification;
  // Boxes after the first, in response order.
  std::vector<LabeledBox> extra_boxes;
  // Set when the task text names the other task type. The model's answer is
  // kept.
  bool task_type_mismatch = false;
  std::vector<int> sampled_high;
  std::vector<int> sampled_left;
  std::vector<int> sampled_right;

  friend bool operator==(const LabelProvenance&,
                         const LabelProvenance&) = default;
};

struct GroundedLabel {
  std::string episode_id;
  int segment_id = 0;
  NormBox box;
  std::string label;
  TaskType task_type = TaskType::kPick;
  Arm arm_used = Arm::kLeft;
  // Index into the concatenated prompt frame sequence.
  int key_frame_index = 0;
  // High-view source frame that `box` refers to: 0 when propagated.
  int frame_index = 0;
  LabelProvenance provenance;

  friend bool operator==(const GroundedLabel&, const GroundedLabel&) = default;
};

struct AnnotateOptions {
  int frames = kDefaultSampledFrames;
  int segment_id = 0;
  // Copy the box to the first high-view frame; valid for a static overhead
  // camera. When false the box stays on the high-view frame of the key
  // moment.
  bool propagate_to_first_frame = true;
};

// Frames already sampled per camera, with their source indices.
struct SampledViews {
  std::vector<ImageBuffer> high, left, right;
  std::vector<int> high_indices, left_indices, right_indices;
};

absl::StatusOr<SampledViews> SampleViews(const Episode& episode, int frames);

// One model round trip for an already sampled episode. Errors carry the raw
// response (RawResponseOf) when one was received.
absl::StatusOr<GroundedLabel> AnnotateViews(const std::string& episode_id,
                                            const std::string& task_text,
                                            const SampledViews& views,
                                            ModelClient& client,
                                            const AnnotateOptions& options);

absl::StatusOr<GroundedLabel> AnnotateEpisode(const Episode& episode,
                                              ModelClient& client,
                                              const AnnotateOptions& options);

// Annotates episodes on up to `max_in_flight` worker threads. Results are in
// input order and independent of scheduling.
std::vector<absl::StatusOr<GroundedLabel>> AnnotateAll(
    const std::vector<Episode>& episodes, ModelClient& client,
    const AnnotateOptions& options, int max_in_flight);

std::string LabelToJson(const GroundedLabel& label);
absl::StatusOr<GroundedLabel> LabelFromJson(const std::string& text);

// <root>/labels/<episode_id>.<segment_id>.json
std::filesystem::path LabelPath(const std::filesystem::path& root,
                                const std::string& episode_id, int segment_id);
absl::Status WriteLabel(const std::filesystem::path& root,
                        const GroundedLabel& label);
absl::StatusOr<GroundedLabel> ReadLabel(const std::filesystem::path& path);

// AnnotateEpisode followed by WriteLabel under `root`. Nothing is written
// when annotation fails.
absl::StatusOr<GroundedLabel> AnnotateEpisodeToStore(
    const Episode& episode, ModelClient& client,
    const AnnotateOptions& options, const std::filesystem::path& root);

struct PointToBoxResult {
  NormBox box;
  std::string label;
  int region_count = 0;
  std::vector<LabeledBox> extra_boxes;
  std::string raw_response;
};

// Asks the model for the region a pointing gesture (or phrase) refers to in
// `image`. The first returned region is used.
absl::StatusOr<PointToBoxResult> PointToBox(const ImageBuffer& image,
                                            const std::string& task_text,
                                            ModelClient& client);

}  // namespace groundkit

#endif  // GROUNDKIT_ANNOTATE_ANNOTATE_H_
