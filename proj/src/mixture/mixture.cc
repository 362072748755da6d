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

#include "groundkit/mixture/mixture.h"

#include <algorithm>
#include <set>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "groundkit/core/random.h"
#include "groundkit/core/version.h"
#include "json.hpp"

namespace groundkit {
namespace {

std::string RecordKey(const Sample& s) {
  std::string key = absl::StrCat(s.episode_id, "\x1f",
                                 std::string(SampleModalityName(s.modality)),
                                 "\x1f", s.instruction);
  if (s.grounding) {
    const NormBox& b = s.grounding->box;
    absl::StrAppend(&key, "\x1f",
                    absl::StrFormat("%a,%a,%a,%a", b.x_min, b.y_min, b.x_max,
                                    b.y_max),
                    "\x1f", std::string(GroundingFormatName(s.grounding->format)),
                    "\x1f", s.grounding->label);
  }
  return key;
}

std::vector<Sample> Dedup(const std::vector<Sample>& in) {
  std::set<std::string> seen;
  std::vector<Sample> out;
  for (const Sample& s : in) {
    if (seen.insert(RecordKey(s)).second) out.push_back(s);
  }
  return out;
}

absl::Status CheckModality(const DatasetManifest& m, SampleModality want,
                           const char* side) {
  if (m.records.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        side, " manifest is empty; a mixture requires both modalities"));
  }
  for (size_t i = 0; i < m.records.size(); ++i) {
    const Sample& s = m.records[i];
    if (absl::Status st = s.Validate(); !st.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(side, " record ", i, ": ", st.message()));
    }
    if (s.modality != want) {
      return absl::InvalidArgumentError(absl::StrCat(
          side, " record ", i, " has modality ",
          std::string(SampleModalityName(s.modality))));
    }
  }
  return absl::OkStatus();
}

// Keeps `keep` records. Subsampling preserves input order; oversampling
// appends draws with replacement after the full input.
std::vector<Sample> Resize(const std::vector<Sample>& in, size_t keep, Rng& rng,
                           std::vector<std::string>* dropped) {
  std::vector<Sample> out;
  if (keep <= in.size()) {
    std::vector<size_t> idx = SampleWithoutReplacement(rng, in.size(), keep);
    std::sort(idx.begin(), idx.end());
    std::vector<bool> kept(in.size(), false);
    for (size_t i : idx) {
      kept[i] = true;
      out.push_back(in[i]);
    }
    for (size_t i = 0; i < in.size(); ++i) {
      if (!kept[i]) dropped->push_back(in[i].episode_id);
    }
    return out;
  }
  out = in;
  while (out.size() < keep) {
    out.push_back(in[UniformInt(rng, 0, static_cast<int64_t>(in.size()) - 1)]);
  }
  return out;
}

}  // namespace

absl::Status MixtureSpec::Validate() const {
  if (ratio_text < 1 || ratio_visual < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mixture ratios must be positive, got ", ratio_text, ":",
        ratio_visual));
  }
  return absl::OkStatus();
}

absl::StatusOr<MixtureSpec> ParseRatio(const std::string& text) {
  const size_t colon = text.find(':');
  MixtureSpec spec;
  if (colon == std::string::npos ||
      !absl::SimpleAtoi(text.substr(0, colon), &spec.ratio_text) ||
      !absl::SimpleAtoi(text.substr(colon + 1), &spec.ratio_visual)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ratio must look like T:V, got '", text, "'"));
  }
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  return spec;
}

absl::StatusOr<DatasetManifest> BuildMixture(const DatasetManifest& text,
                                             const DatasetManifest& visual,
                                             const MixtureSpec& spec) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (absl::Status s = CheckModality(text, SampleModality::kText, "text");
      !s.ok()) {
    return s;
  }
  if (absl::Status s = CheckModality(visual, SampleModality::kVisual, "visual");
      !s.ok()) {
    return s;
  }
  const std::vector<Sample> t = spec.dedup ? Dedup(text.records) : text.records;
  const std::vector<Sample> v =
      spec.dedup ? Dedup(visual.records) : visual.records;

  const size_t rt = static_cast<size_t>(spec.ratio_text);
  const size_t rv = static_cast<size_t>(spec.ratio_visual);
  const size_t units = spec.oversample
                           ? std::max((t.size() + rt - 1) / rt,
                                      (v.size() + rv - 1) / rv)
                           : std::min(t.size() / rt, v.size() / rv);
  if (units == 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "not enough records for ratio ", spec.ratio_text, ":",
        spec.ratio_visual, " (", t.size(), " text, ", v.size(), " visual)"));
  }

  Rng text_rng(DeriveSeed(spec.shuffle_seed, "mixture.text"));
  Rng visual_rng(DeriveSeed(spec.shuffle_seed, "mixture.visual"));
  Rng shuffle_rng(DeriveSeed(spec.shuffle_seed, "mixture.shuffle"));
  std::vector<std::string> dropped_text;
  std::vector<std::string> dropped_visual;
  std::vector<Sample> kept_t = Resize(t, units * rt, text_rng, &dropped_text);
  std::vector<Sample> kept_v =
      Resize(v, units * rv, visual_rng, &dropped_visual);

  DatasetManifest out;
  out.records = std::move(kept_t);
  out.records.insert(out.records.end(), kept_v.begin(), kept_v.end());
  Shuffle(shuffle_rng, out.records);

  Provenance& p = out.provenance;
  p.tool_version = std::string(kGroundkitVersion);
  p.seed = spec.shuffle_seed;
  std::set<std::string> roots(text.provenance.source_roots.begin(),
                              text.provenance.source_roots.end());
  roots.insert(visual.provenance.source_roots.begin(),
               visual.provenance.source_roots.end());
  p.source_roots.assign(roots.begin(), roots.end());
  p.notes["mixture.ratio"] =
      absl::StrCat(spec.ratio_text, ":", spec.ratio_visual);
  p.notes["mixture.mode"] = spec.oversample ? "oversample" : "subsample";
  p.notes["mixture.dedup"] = spec.dedup ? "true" : "false";
  p.notes["mixture.source_text"] = absl::StrCat(text.records.size());
  p.notes["mixture.source_visual"] = absl::StrCat(visual.records.size());
  p.notes["mixture.kept_text"] = absl::StrCat(units * rt);
  p.notes["mixture.kept_visual"] = absl::StrCat(units * rv);
  p.notes["mixture.dropped_text_ids"] = absl::StrJoin(dropped_text, ",");
  p.notes["mixture.dropped_visual_ids"] = absl::StrJoin(dropped_visual, ",");
  return out;
}

DatasetManifest DeriveTextManifest(
    const DatasetManifest& visual,
    const std::map<std::string, std::string>& full_text) {
  DatasetManifest out;
  out.provenance = visual.provenance;
  out.provenance.notes["derived_from"] = "visual";
  for (const Sample& s : visual.records) {
    Sample t;
    t.episode_id = s.episode_id;
    t.modality = SampleModality::kText;
    auto it = full_text.find(s.episode_id);
    t.instruction = it != full_text.end() ? it->second : s.instruction;
    out.records.push_back(std::move(t));
  }
  return out;
}

MixtureStats ComputeMixtureStats(const DatasetManifest& manifest) {
  MixtureStats stats;
  for (const Sample& s : manifest.records) {
    ++stats.per_episode[s.episode_id];
    if (s.modality == SampleModality::kVisual) {
      ++stats.visual;
      if (s.grounding) {
        ++stats.format_histogram[std::string(
            GroundingFormatName(s.grounding->format))];
      }
    } else {
      ++stats.text;
    }
  }
  return stats;
}

std::string MixtureStatsToJson(const MixtureStats& stats) {
  nlohmann::ordered_json j;
  j["text"] = stats.text;
  j["visual"] = stats.visual;
  j["format_histogram"] = stats.format_histogram;
  j["per_episode"] = stats.per_episode;
  return j.dump(2) + "\n";
}

}  // namespace groundkit
