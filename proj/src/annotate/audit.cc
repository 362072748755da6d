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

#include "groundkit/annotate/audit.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "groundkit/core/random.h"
#include "json.hpp"

namespace groundkit {

using ordered_json = nlohmann::ordered_json;

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kUnreviewed:
      return "unreviewed";
    case Verdict::kCorrectTarget:
      return "correct-target";
    case Verdict::kCoverageInsufficient:
      return "coverage-insufficient";
    case Verdict::kWrongTarget:
      return "wrong-target";
  }
  return "unreviewed";
}

std::optional<Verdict> ParseVerdict(std::string_view s) {
  for (Verdict v : {Verdict::kUnreviewed, Verdict::kCorrectTarget,
                    Verdict::kCoverageInsufficient, Verdict::kWrongTarget}) {
    if (VerdictName(v) == s) return v;
  }
  return std::nullopt;
}

absl::StatusOr<AuditBatch> DrawAuditBatch(const DatasetManifest& manifest,
                                          int n, uint64_t seed) {
  if (n < 0) return absl::InvalidArgumentError("audit size must be >= 0");
  std::vector<size_t> visual;
  for (size_t i = 0; i < manifest.records.size(); ++i) {
    if (manifest.records[i].grounding) visual.push_back(i);
  }
  if (static_cast<size_t>(n) > visual.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "audit size ", n, " exceeds ", visual.size(), " visual records"));
  }
  Rng rng(seed);
  AuditBatch batch;
  batch.seed = seed;
  for (size_t pick : SampleWithoutReplacement(rng, visual.size(), n)) {
    const Sample& s = manifest.records[visual[pick]];
    batch.items.push_back({s.episode_id, visual[pick], s.instruction,
                           s.grounding->box, Verdict::kUnreviewed});
  }
  return batch;
}

std::optional<double> AuditAccuracy(const AuditBatch& batch) {
  if (batch.items.empty()) return std::nullopt;
  int correct = 0;
  for (const AuditItem& item : batch.items) {
    if (item.verdict == Verdict::kCorrectTarget) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(batch.items.size());
}

std::string FormatAuditAccuracy(const AuditBatch& batch) {
  const std::optional<double> acc = AuditAccuracy(batch);
  if (!acc) return "N/A";
  int correct = 0;
  for (const AuditItem& item : batch.items) {
    if (item.verdict == Verdict::kCorrectTarget) ++correct;
  }
  return absl::StrFormat("%.2f (%d/%d)", *acc, correct,
                         static_cast<int>(batch.items.size()));
}

std::string AuditBatchToJson(const AuditBatch& batch) {
  ordered_json j;
  j["seed"] = batch.seed;
  j["items"] = ordered_json::array();
  for (const AuditItem& item : batch.items) {
    j["items"].push_back(
        {{"episode_id", item.episode_id},
         {"record_index", item.record_index},
         {"instruction", item.instruction},
         {"box", {item.box.x_min, item.box.y_min, item.box.x_max,
                  item.box.y_max}},
         {"verdict", std::string(VerdictName(item.verdict))}});
  }
  return j.dump(2) + "\n";
}

absl::StatusOr<AuditBatch> AuditBatchFromJson(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError("audit: bad JSON");
  AuditBatch batch;
  try {
    batch.seed = j.at("seed").get<uint64_t>();
    for (const auto& e : j.at("items")) {
      AuditItem item;
      item.episode_id = e.at("episode_id").get<std::string>();
      item.record_index = e.at("record_index").get<size_t>();
      item.instruction = e.at("instruction").get<std::string>();
      const auto& b = e.at("box");
      item.box = NormBox{b.at(0).get<double>(), b.at(1).get<double>(),
                         b.at(2).get<double>(), b.at(3).get<double>()};
      auto v = ParseVerdict(e.at("verdict").get<std::string>());
      if (!v) return absl::InvalidArgumentError("audit: unknown verdict");
      item.verdict = *v;
      batch.items.push_back(std::move(item));
    }
  } catch (const ordered_json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("audit: ", e.what()));
  }
  return batch;
}

}  // namespace groundkit
