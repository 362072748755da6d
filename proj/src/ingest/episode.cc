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

#include "groundkit/ingest/episode.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "groundkit/core/image_io.h"
#include "groundkit/core/status_macros.h"
#include "json.hpp"

namespace groundkit {
namespace {

namespace fs = std::filesystem;

// Numeric stem for frame files, nullopt for anything else.
std::optional<long long> FrameNumber(const fs::path& file) {
  const std::string ext = absl::AsciiStrToLower(file.extension().string());
  if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") return std::nullopt;
  const std::string stem = file.stem().string();
  if (stem.empty() || stem.size() > 12) return std::nullopt;
  for (char c : stem) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  return std::stoll(stem);
}

absl::Status IngestError(std::string_view what, const fs::path& path) {
  return absl::NotFoundError(absl::StrCat(std::string(what), ": ", path.string()));
}

// Cheap readability check: the file opens and starts with PNG/JPEG magic.
absl::Status CheckImageHeader(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char head[8] = {};
  in.read(head, sizeof(head));
  if (!in && in.gcount() < 3) {
    return absl::DataLossError(
        absl::StrCat("unreadable image: ", path.string()));
  }
  if (DetectImageFormat(std::string_view(head, static_cast<size_t>(
                                                   in.gcount()))) ==
      ImageFormat::kUnknown) {
    return absl::DataLossError(
        absl::StrCat("unreadable image: ", path.string()));
  }
  return absl::OkStatus();
}

}  // namespace

std::string_view CameraRoleName(CameraRole role) {
  switch (role) {
    case CameraRole::kHigh:
      return "high";
    case CameraRole::kLeftWrist:
      return "left_wrist";
    case CameraRole::kRightWrist:
      return "right_wrist";
  }
  return "high";
}

std::optional<CameraRole> ParseCameraRole(std::string_view name) {
  for (CameraRole role : kAllCameraRoles) {
    if (CameraRoleName(role) == name) return role;
  }
  return std::nullopt;
}

int Episode::FrameCount(CameraRole role) const {
  auto it = frames.find(role);
  return it == frames.end() ? 0 : static_cast<int>(it->second.size());
}

absl::StatusOr<Episode> ScanEpisode(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    return IngestError("episode directory absent", dir);
  }
  Episode episode;
  episode.dir = dir;

  const fs::path meta_path = dir / "meta.json";
  std::ifstream meta_in(meta_path);
  if (!meta_in) return IngestError("metadata file missing", meta_path);
  nlohmann::json meta = nlohmann::json::parse(meta_in, nullptr, false);
  if (meta.is_discarded() || !meta.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("metadata is not a JSON object: ", meta_path.string()));
  }
  for (const char* key : {"episode_id", "task"}) {
    if (!meta.contains(key) || !meta[key].is_string()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "metadata key '", key, "' missing or not a string: ",
          meta_path.string()));
    }
  }
  episode.episode_id = meta["episode_id"].get<std::string>();
  episode.task_text = meta["task"].get<std::string>();

  for (CameraRole role : kAllCameraRoles) {
    const fs::path cam_dir = dir / std::string(CameraRoleName(role));
    if (!fs::is_directory(cam_dir, ec)) {
      return absl::NotFoundError(absl::StrCat("camera role ",
                                              std::string(CameraRoleName(role)),
                                              " absent: ", cam_dir.string()));
    }
    std::vector<std::pair<long long, fs::path>> numbered;
    for (const auto& entry : fs::directory_iterator(cam_dir, ec)) {
      if (!entry.is_regular_file()) continue;
      if (auto n = FrameNumber(entry.path())) {
        numbered.emplace_back(*n, entry.path());
      }
    }
    if (numbered.empty()) {
      return absl::NotFoundError(absl::StrCat(
          "camera role ", std::string(CameraRoleName(role)), " has no frames: ",
          cam_dir.string()));
    }
    std::sort(numbered.begin(), numbered.end());
    auto& list = episode.frames[role];
    for (auto& [n, path] : numbered) {
      GK_RETURN_IF_ERROR(CheckImageHeader(path));
      list.push_back(std::move(path));
    }
  }
  return episode;
}

absl::StatusOr<std::vector<int>> UniformFrameIndices(int frame_count, int t) {
  if (t < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("frame sample size must be >= 2, got ", t));
  }
  if (frame_count < 1) {
    return absl::InvalidArgumentError("camera has no frames");
  }
  std::vector<int> indices;
  if (frame_count < t) {
    for (int i = 0; i < frame_count; ++i) indices.push_back(i);
    return indices;
  }
  indices.reserve(t);
  const int64_t span = frame_count - 1;
  for (int64_t k = 0; k < t; ++k) {
    indices.push_back(static_cast<int>(k * span / (t - 1)));
  }
  return indices;
}

absl::StatusOr<FrameSample> SampleUniform(const Episode& episode,
                                          CameraRole camera, int t) {
  FrameSample sample;
  sample.camera = camera;
  GK_ASSIGN_OR_RETURN(sample.indices,
                      UniformFrameIndices(episode.FrameCount(camera), t));
  return sample;
}

absl::StatusOr<std::vector<ImageBuffer>> LoadFrames(
    const Episode& episode, const FrameSample& sample) {
  auto it = episode.frames.find(sample.camera);
  if (it == episode.frames.end()) {
    return absl::NotFoundError(absl::StrCat(
        "camera role ", std::string(CameraRoleName(sample.camera)), " absent"));
  }
  std::vector<ImageBuffer> images;
  images.reserve(sample.indices.size());
  for (int index : sample.indices) {
    if (index < 0 || index >= static_cast<int>(it->second.size())) {
      return absl::OutOfRangeError(absl::StrCat("frame index ", index,
                                                " out of range"));
    }
    GK_ASSIGN_OR_RETURN(ImageBuffer image, LoadImage(it->second[index]));
    images.push_back(std::move(image));
  }
  return images;
}

}  // namespace groundkit
