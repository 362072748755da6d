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

#ifndef GROUNDKIT_ANNOTATE_AUDIT_H_
#define GROUNDKIT_ANNOTATE_AUDIT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "groundkit/core/box.h"
#include "groundkit/ingest/manifest.h"

namespace groundkit {

enum class Verdict {
  kUnreviewed,
  kCorrectTarget,
  kCoverageInsufficient,
  kWrongTarget,
};

std::string_view VerdictName(Verdict v);
std::optional<Verdict> ParseVerdict(std::string_view s);

struct AuditItem {
  std::string episode_id;
  size_t record_index = 0;  // Position in the source manifest.
  std::string instruction;
  NormBox box;
  Verdict verdict = Verdict::kUnreviewed;

  friend bool operator==(const AuditItem&, const AuditItem&) = default;
};

struct AuditBatch {
  uint64_t seed = 0;
  std::vector<AuditItem> items;

  friend bool operator==(const AuditBatch&, const AuditBatch&) = default;
};

inline constexpr int kDefaultAuditSize = 50;

// Seeded draw of `n` distinct visual records. Fails when fewer exist.
absl::StatusOr<AuditBatch> DrawAuditBatch(const DatasetManifest& manifest,
                                          int n, uint64_t seed);

// correct-target / batch size; nullopt for an empty batch.
std::optional<double> AuditAccuracy(const AuditBatch& batch);

// "0.92 (46/50)" or "N/A".
std::string FormatAuditAccuracy(const AuditBatch& batch);

std::string AuditBatchToJson(const AuditBatch& batch);
absl::StatusOr<AuditBatch> AuditBatchFromJson(const std::string& text);

}  // namespace groundkit

#endif  // GROUNDKIT_ANNOTATE_AUDIT_H_
