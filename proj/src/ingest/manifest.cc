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

#include "groundkit/ingest/manifest.h"

#include "absl/strings/str_cat.h"
#include "groundkit/core/image_io.h"
#include "groundkit/core/status_macros.h"
#include "json.hpp"

namespace groundkit {
namespace {

using json = nlohmann::json;

json SampleToJson(const Sample& s) {
  json j;
  j["episode_id"] = s.episode_id;
  j["modality"] = std::string(SampleModalityName(s.modality));
  j["instruction"] = s.instruction;
  if (s.grounding) {
    const NormBox& b = s.grounding->box;
    j["box"] = {b.x_min, b.y_min, b.x_max, b.y_max};
    j["format"] = std::string(GroundingFormatName(s.grounding->format));
    if (!s.grounding->label.empty()) j["label"] = s.grounding->label;
  }
  return j;
}

absl::StatusOr<Sample> SampleFromJson(const json& j) {
  if (!j.is_object()) return absl::InvalidArgumentError("record is not an object");
  Sample s;
  for (const char* key : {"episode_id", "modality", "instruction"}) {
    if (!j.contains(key) || !j[key].is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("missing or non-string field '", key, "'"));
    }
  }
  s.episode_id = j["episode_id"].get<std::string>();
  s.instruction = j["instruction"].get<std::string>();
  const std::string modality = j["modality"].get<std::string>();
  if (modality == "text") {
    s.modality = SampleModality::kText;
  } else if (modality == "visual") {
    s.modality = SampleModality::kVisual;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown modality '", modality, "'"));
  }
  if (j.contains("box")) {
    const json& box = j["box"];
    if (!box.is_array() || box.size() != 4) {
      return absl::InvalidArgumentError("box must hold four numbers");
    }
    for (const json& v : box) {
      if (!v.is_number()) {
        return absl::InvalidArgumentError("box must hold four numbers");
      }
    }
    Grounding g;
    g.box = NormBox{box[0].get<double>(), box[1].get<double>(),
                    box[2].get<double>(), box[3].get<double>()};
    const std::string format = j.value("format", std::string("overlay"));
    auto parsed = ParseGroundingFormat(format);
    if (!parsed) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown format '", format, "'"));
    }
    g.format = *parsed;
    g.label = j.value("label", std::string());
    s.grounding = g;
  }
  GK_RETURN_IF_ERROR(s.Validate());
  return s;
}

}  // namespace

std::string_view SampleModalityName(SampleModality modality) {
  return modality == SampleModality::kVisual ? "visual" : "text";
}

absl::Status Sample::Validate() const {
  if (episode_id.empty()) return absl::InvalidArgumentError("empty episode_id");
  if (instruction.empty()) {
    return absl::InvalidArgumentError("empty instruction");
  }
  const bool visual = modality == SampleModality::kVisual;
  if (visual && !grounding) {
    return absl::FailedPreconditionError(absl::StrCat(
        "invariant violated: visual sample for episode ", episode_id,
        " lacks grounding"));
  }
  if (!visual && grounding) {
    return absl::FailedPreconditionError(absl::StrCat(
        "invariant violated: text sample for episode ", episode_id,
        " carries grounding"));
  }
  if (grounding) GK_RETURN_IF_ERROR(grounding->box.Validate());
  return absl::OkStatus();
}

std::string SerializeManifest(const DatasetManifest& manifest) {
  json header;
  header["kind"] = "header";
  header["tool_version"] = manifest.provenance.tool_version;
  header["seed"] = manifest.provenance.seed;
  header["source_roots"] = manifest.provenance.source_roots;
  header["notes"] = manifest.provenance.notes;
  std::string out = header.dump();
  out.push_back('\n');
  for (const Sample& s : manifest.records) {
    out += SampleToJson(s).dump();
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<DatasetManifest> ParseManifest(std::string_view text) {
  DatasetManifest manifest;
  bool have_header = false;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      return absl::InvalidArgumentError(
          absl::StrCat("manifest line ", line_no, ": malformed JSON"));
    }
    if (!have_header) {
      if (!j.is_object() || j.value("kind", std::string()) != "header") {
        return absl::InvalidArgumentError(
            absl::StrCat("manifest line ", line_no, ": expected header"));
      }
      try {
        manifest.provenance.tool_version =
            j.value("tool_version", std::string());
        manifest.provenance.seed = j.value("seed", uint64_t{0});
        manifest.provenance.source_roots =
            j.value("source_roots", std::vector<std::string>{});
        manifest.provenance.notes =
            j.value("notes", std::map<std::string, std::string>{});
      } catch (const json::exception& e) {
        return absl::InvalidArgumentError(absl::StrCat(
            "manifest line ", line_no, ": bad header: ", e.what()));
      }
      have_header = true;
      continue;
    }
    absl::StatusOr<Sample> sample = SampleFromJson(j);
    if (!sample.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "manifest line ", line_no, ": ", sample.status().message()));
    }
    manifest.records.push_back(*std::move(sample));
  }
  if (!have_header) {
    return absl::InvalidArgumentError("manifest line 1: expected header");
  }
  return manifest;
}

absl::Status WriteManifest(const DatasetManifest& manifest,
                           const std::filesystem::path& path) {
  for (size_t i = 0; i < manifest.records.size(); ++i) {
    if (absl::Status s = manifest.records[i].Validate(); !s.ok()) {
      return absl::FailedPreconditionError(
          absl::StrCat("record ", i, ": ", s.message()));
    }
  }
  return WriteFileBytes(path, SerializeManifest(manifest));
}

absl::StatusOr<DatasetManifest> ReadManifest(
    const std::filesystem::path& path) {
  GK_ASSIGN_OR_RETURN(std::string text, ReadFileBytes(path));
  return ParseManifest(text);
}

absl::Status CheckEpisodesResolvable(const DatasetManifest& manifest,
                                     const std::filesystem::path& root) {
  std::error_code ec;
  for (const Sample& s : manifest.records) {
    if (!std::filesystem::is_directory(root / s.episode_id, ec)) {
      return absl::NotFoundError(absl::StrCat(
          "episode ", s.episode_id, " not found under ", root.string()));
    }
  }
  return absl::OkStatus();
}

}  // namespace groundkit
