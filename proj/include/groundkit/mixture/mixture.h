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

#ifndef GROUNDKIT_MIXTURE_MIXTURE_H_
#define GROUNDKIT_MIXTURE_MIXTURE_H_

#include <cstdint>
#include <map>
#include <string>

#include "absl/status/statusor.h"
#include "groundkit/ingest/manifest.h"

namespace groundkit {

struct MixtureSpec {
  int ratio_text = 1;
  int ratio_visual = 1;
  uint64_t shuffle_seed = 0;
  // Drop exact duplicate records within each input before balancing.
  bool dedup = false;
  // Balance by drawing extra records with replacement from the smaller side
  // instead of subsampling the larger one.
  bool oversample = false;

  absl::Status Validate() const;
};

// Parses "T:V", e.g. "1:1".
absl::StatusOr<MixtureSpec> ParseRatio(const std::string& text);

// Balanced union of a text-only and a visual manifest. Without oversampling
// the output holds k whole ratio units, k = min(n_text / r_text,
// n_visual / r_visual), so the counts match the ratio exactly. Records are
// drawn without replacement, then the union is shuffled, all from
// `spec.shuffle_seed`. Provenance notes record source and kept counts, the
// ratio, the seed and the dropped episode ids.
absl::StatusOr<DatasetManifest> BuildMixture(const DatasetManifest& text,
                                             const DatasetManifest& visual,
                                             const MixtureSpec& spec);

// One text record per visual record: grounding dropped, the instruction
// replaced by the episode's full referring instruction when `full_text` has
// one.
DatasetManifest DeriveTextManifest(
    const DatasetManifest& visual,
    const std::map<std::string, std::string>& full_text);

struct MixtureStats {
  int text = 0;
  int visual = 0;
  std::map<std::string, int> per_episode;
  std::map<std::string, int> format_histogram;  // Visual records only.

  friend bool operator==(const MixtureStats&, const MixtureStats&) = default;
};

MixtureStats ComputeMixtureStats(const DatasetManifest& manifest);
std::string MixtureStatsToJson(const MixtureStats& stats);

}  // namespace groundkit

#endif  // GROUNDKIT_MIXTURE_MIXTURE_H_
