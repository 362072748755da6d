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

#ifndef GROUNDKIT_INGEST_MANIFEST_H_
#define GROUNDKIT_INGEST_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "groundkit/core/box.h"
#include "groundkit/core/instruction.h"

namespace groundkit {

enum class SampleModality { kText, kVisual };

std::string_view SampleModalityName(SampleModality modality);

struct Grounding {
  NormBox box;
  GroundingFormat format = GroundingFormat::kBoxOverlay;
  std::string label;  // Optional free-form target label.

  friend bool operator==(const Grounding&, const Grounding&) = default;
};

// One training sample. Visual samples carry a grounding; text samples never
// do.
struct Sample {
  std::string episode_id;
  SampleModality modality = SampleModality::kText;
  std::string instruction;
  std::optional<Grounding> grounding;

  absl::Status Validate() const;
  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Provenance {
  std::string tool_version;
  uint64_t seed = 0;
  std::vector<std::string> source_roots;
  std::map<std::string, std::string> notes;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct DatasetManifest {
  Provenance provenance;
  std::vector<Sample> records;

  friend bool operator==(const DatasetManifest&,
                         const DatasetManifest&) = default;
};

// Line-delimited JSON. Line 1 is the header:
//   {"kind":"header","tool_version":...,"seed":...,"source_roots":[...],
//    "notes":{...}}
// followed by one sample per line:
//   {"episode_id":...,"modality":"text"|"visual","instruction":...,
//    "box":[x_min,y_min,x_max,y_max],"format":"overlay","label":...}
// "box", "format" and "label" appear only on visual samples.
std::string SerializeManifest(const DatasetManifest& manifest);
absl::StatusOr<DatasetManifest> ParseManifest(std::string_view text);

// Refuses to write manifests whose samples violate their invariants.
absl::Status WriteManifest(const DatasetManifest& manifest,
                           const std::filesystem::path& path);
absl::StatusOr<DatasetManifest> ReadManifest(const std::filesystem::path& path);

// Checks that every sample's episode directory exists under `root`.
absl::Status CheckEpisodesResolvable(const DatasetManifest& manifest,
                                     const std::filesystem::path& root);

}  // namespace groundkit

#endif  // GROUNDKIT_INGEST_MANIFEST_H_
