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

#ifndef GROUNDKIT_INGEST_EPISODE_H_
#define GROUNDKIT_INGEST_EPISODE_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "groundkit/core/image.h"

namespace groundkit {

// Episode directory layout:
//
//   <root>/<episode_id>/meta.json          {"episode_id": ..., "task": ...}
//   <root>/<episode_id>/high/000.png       overhead camera
//   <root>/<episode_id>/left_wrist/000.png
//   <root>/<episode_id>/right_wrist/000.png
//
// Frames are index-aligned across cameras; files that are not a numeric stem
// with a .png/.jpg/.jpeg extension are ignored.

enum class CameraRole { kHigh, kLeftWrist, kRightWrist };

inline constexpr std::array<CameraRole, 3> kAllCameraRoles = {
    CameraRole::kHigh, CameraRole::kLeftWrist, CameraRole::kRightWrist};

std::string_view CameraRoleName(CameraRole role);
std::optional<CameraRole> ParseCameraRole(std::string_view name);

struct Episode {
  std::string episode_id;
  std::string task_text;
  std::filesystem::path dir;
  std::map<CameraRole, std::vector<std::filesystem::path>> frames;

  int FrameCount(CameraRole role) const;
};

struct FrameSample {
  CameraRole camera = CameraRole::kHigh;
  std::vector<int> indices;
};

inline constexpr int kDefaultSampledFrames = 20;

absl::StatusOr<Episode> ScanEpisode(const std::filesystem::path& dir);

// Endpoint-inclusive uniform indices floor(k * (n - 1) / (t - 1)) for
// k = 0..t-1 when n >= t; all of 0..n-1 otherwise. Requires t >= 2.
absl::StatusOr<std::vector<int>> UniformFrameIndices(int frame_count, int t);

absl::StatusOr<FrameSample> SampleUniform(const Episode& episode,
                                          CameraRole camera,
                                          int t = kDefaultSampledFrames);

absl::StatusOr<std::vector<ImageBuffer>> LoadFrames(
    const Episode& episode, const FrameSample& sample);

}  // namespace groundkit

#endif  // GROUNDKIT_INGEST_EPISODE_H_
