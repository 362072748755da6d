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

#include "groundkit/sim/eval.h"

#include <algorithm>
#include <atomic>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "groundkit/core/image_io.h"
#include "groundkit/core/random.h"
#include "groundkit/core/status_macros.h"
#include "groundkit/render/render.h"
#include "json.hpp"

namespace groundkit {
namespace {

struct TrialJob {
  size_t family_index = 0;
  int scene_index = 0;
  int trial_index = 0;
};

struct TrialOutcome {
  // One entry per configured policy.
  std::vector<absl::StatusOr<TrialResult>> results;
};

absl::StatusOr<TrialResult> RunOne(const EvalConfig& cfg, const Scene& scene,
                                   const ImageBuffer& base, PolicyKind policy,
                                   uint64_t seed) {
  TrialInput input;
  input.policy = policy;
  if (policy == PolicyKind::kText) {
    input.text = cfg.instruction ? *cfg.instruction
                 : cfg.text_mode == TextMode::kMure ? scene.mure_text
                                                    : scene.coarse_text;
  } else {
    GK_ASSIGN_OR_RETURN(NormBox box, GroundTruthBox(scene));
    input.grounded_image = RenderOverlay(
        base, box, DefaultOverlayStyle(base.width(), base.height()));
    input.text = scene.task() == SimTask::kPick ? "pick up" : "place here";
  }
  return RunTrial(scene, input, cfg.protocol, seed);
}

}  // namespace

absl::StatusOr<EvalReport> RunEval(const EvalConfig& config) {
  GK_RETURN_IF_ERROR(config.protocol.Validate());
  if (config.families.empty() || config.policies.empty()) {
    return absl::InvalidArgumentError("eval needs at least one family and "
                                      "one policy");
  }
  if (config.scenes_per_family < 1) {
    return absl::InvalidArgumentError("scenes_per_family must be >= 1");
  }
  const int trials = config.protocol.trials_per_scene;

  // scenes[f][i] and their overhead renders.
  std::vector<std::vector<Scene>> scenes(config.families.size());
  std::vector<std::vector<ImageBuffer>> renders(config.families.size());
  for (size_t f = 0; f < config.families.size(); ++f) {
    const std::string key =
        absl::StrCat("scene/", std::string(SimFamilyName(config.families[f])));
    for (int i = 0; i < config.scenes_per_family; ++i) {
      GK_ASSIGN_OR_RETURN(
          Scene s, GenScene(config.families[f], config.params,
                            DeriveSeed(config.seed, key, static_cast<uint64_t>(i))));
      renders[f].push_back(RenderOverhead(s));
      scenes[f].push_back(std::move(s));
    }
  }

  std::vector<TrialJob> jobs;
  for (size_t f = 0; f < config.families.size(); ++f) {
    for (int i = 0; i < config.scenes_per_family; ++i) {
      for (int t = 0; t < trials; ++t) jobs.push_back({f, i, t});
    }
  }
  std::vector<TrialOutcome> outcomes(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t j = next++; j < jobs.size(); j = next++) {
      const TrialJob& job = jobs[j];
      const SimFamily family = config.families[job.family_index];
      const std::string fname(SimFamilyName(family));
      const uint64_t index =
          static_cast<uint64_t>(job.scene_index) * trials + job.trial_index;
      const Scene& base_scene = scenes[job.family_index][job.scene_index];
      Scene scene = base_scene;
      if (config.resample_target) {
        Rng target_rng(
            DeriveSeed(config.seed, absl::StrCat("target/", fname), index));
        scene = ResampleTarget(base_scene, config.params.target_rule,
                               target_rng);
      }
      for (PolicyKind policy : config.policies) {
        const uint64_t seed = DeriveSeed(
            config.seed,
            absl::StrCat("trial/", fname, "/", std::string(PolicyKindName(policy))), index);
        outcomes[j].results.push_back(
            RunOne(config, scene, renders[job.family_index][job.scene_index],
                   policy, seed));
      }
    }
  };
  const int n = std::clamp<int>(config.threads, 1,
                                std::max<int>(1, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  EvalReport report;
  report.seed = config.seed;
  report.trials_per_scene = trials;
  for (size_t f = 0; f < config.families.size(); ++f) {
    for (size_t p = 0; p < config.policies.size(); ++p) {
      EvalCell cell;
      cell.family = config.families[f];
      cell.policy = config.policies[p];
      for (int i = 0; i < config.scenes_per_family; ++i) {
        SceneOutcome so;
        so.scene_index = i;
        so.scene_seed = scenes[f][i].seed;
        cell.scenes.push_back(so);
      }
      report.cells.push_back(std::move(cell));
    }
  }
  for (size_t j = 0; j < jobs.size(); ++j) {
    const TrialJob& job = jobs[j];
    for (size_t p = 0; p < config.policies.size(); ++p) {
      const absl::StatusOr<TrialResult>& r = outcomes[j].results[p];
      if (!r.ok()) return r.status();
      EvalCell& cell =
          report.cells[job.family_index * config.policies.size() + p];
      SceneOutcome& so = cell.scenes[job.scene_index];
      ++so.trials;
      ++cell.trials;
      if (r->success) {
        ++so.successes;
        ++cell.successes;
      } else {
        ++cell.failures[std::string(FailureReasonName(r->failure_reason))];
      }
    }
  }

  if (config.frames_dir) {
    for (size_t f = 0; f < config.families.size(); ++f) {
      const std::string fname(SimFamilyName(config.families[f]));
      for (int i = 0; i < config.scenes_per_family; ++i) {
        const ImageBuffer& base = renders[f][i];
        GK_RETURN_IF_ERROR(SavePng(
            base, *config.frames_dir /
                      absl::StrFormat("%s_scene%02d_overhead.png", fname, i)));
        absl::StatusOr<NormBox> box = GroundTruthBox(scenes[f][i]);
        if (box.ok()) {
          GK_RETURN_IF_ERROR(SavePng(
              RenderOverlay(base, *box,
                            DefaultOverlayStyle(base.width(), base.height())),
              *config.frames_dir /
                  absl::StrFormat("%s_scene%02d_grounded.png", fname, i)));
        }
      }
    }
  }
  return report;
}

std::string EvalReportToJson(const EvalReport& report) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["seed"] = report.seed;
  j["trials_per_scene"] = report.trials_per_scene;
  Json cells = Json::array();
  for (const EvalCell& c : report.cells) {
    Json cell;
    cell["family"] = std::string(SimFamilyName(c.family));
    cell["policy"] = std::string(PolicyKindName(c.policy));
    cell["trials"] = c.trials;
    cell["successes"] = c.successes;
    cell["success_rate"] = c.Rate();
    cell["failures"] = c.failures;
    Json scenes = Json::array();
    for (const SceneOutcome& s : c.scenes) {
      scenes.push_back({{"scene_index", s.scene_index},
                        {"scene_seed", s.scene_seed},
                        {"trials", s.trials},
                        {"successes", s.successes}});
    }
    cell["scenes"] = std::move(scenes);
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

std::string FormatEvalTable(const EvalReport& report) {
  std::vector<SimFamily> families;
  std::vector<PolicyKind> policies;
  for (const EvalCell& c : report.cells) {
    if (std::find(families.begin(), families.end(), c.family) ==
        families.end()) {
      families.push_back(c.family);
    }
    if (std::find(policies.begin(), policies.end(), c.policy) ==
        policies.end()) {
      policies.push_back(c.policy);
    }
  }
  std::string out = "| policy |";
  std::string rule = "|---|";
  for (SimFamily f : families) {
    absl::StrAppend(&out, " ", std::string(SimFamilyName(f)), " |");
    absl::StrAppend(&rule, "---|");
  }
  absl::StrAppend(&out, " average |\n", rule, "---|\n");
  for (PolicyKind p : policies) {
    absl::StrAppend(&out, "| ", std::string(PolicyKindName(p)), " |");
    double sum = 0.0;
    int n = 0;
    for (SimFamily f : families) {
      for (const EvalCell& c : report.cells) {
        if (c.family != f || c.policy != p) continue;
        absl::StrAppend(&out, absl::StrFormat(" %.1f (%d/%d) |",
                                              100.0 * c.Rate(), c.successes,
                                              c.trials));
        sum += c.Rate();
        ++n;
      }
    }
    absl::StrAppend(&out, absl::StrFormat(" %.1f |\n", n ? 100.0 * sum / n : 0.0));
  }
  return out;
}

}  // namespace groundkit
