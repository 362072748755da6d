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

#ifndef GROUNDKIT_SIM_EVAL_H_
#define GROUNDKIT_SIM_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "groundkit/sim/scene.h"
#include "groundkit/sim/trial.h"

namespace groundkit {

// Which scene text the text policy receives.
enum class TextMode {
  kCoarse,  // Scene::coarse_text.
  kMure,    // Scene::mure_text.
};

struct EvalConfig {
  std::vector<SimFamily> families;
  std::vector<PolicyKind> policies = {PolicyKind::kText,
                                      PolicyKind::kGrounded};
  int scenes_per_family = 10;
  uint64_t seed = 0;
  SceneParams params;
  TrialProtocol protocol;
  TextMode text_mode = TextMode::kCoarse;
  // Draw a fresh target/goal per trial on a fixed layout.
  bool resample_target = true;
  // Overrides the scene text for every text-policy trial.
  std::optional<std::string> instruction;
  int threads = 1;
  // When set, writes each scene's overhead and first grounded frame here.
  std::optional<std::filesystem::path> frames_dir;
};

struct SceneOutcome {
  int scene_index = 0;
  uint64_t scene_seed = 0;
  int trials = 0;
  int successes = 0;
};

struct EvalCell {
  SimFamily family = SimFamily::kClutter;
  PolicyKind policy = PolicyKind::kText;
  std::vector<SceneOutcome> scenes;
  int trials = 0;
  int successes = 0;
  std::map<std::string, int> failures;  // Reason name -> count.

  double Rate() const {
    return trials > 0 ? static_cast<double>(successes) / trials : 0.0;
  }
};

struct EvalReport {
  uint64_t seed = 0;
  int trials_per_scene = 0;
  std::vector<EvalCell> cells;  // Family-major, then policy.
};

// Seeds: scene i of a family uses DeriveSeed(seed, "scene/<family>", i);
// trial t of scene i draws its target from DeriveSeed(seed,
// "target/<family>", i * trials + t), shared by both policies, and its
// policy stream from DeriveSeed(seed, "trial/<family>/<policy>", same
// index). Reports do not depend on `threads`.
absl::StatusOr<EvalReport> RunEval(const EvalConfig& config);

std::string EvalReportToJson(const EvalReport& report);
// Markdown table: one row per policy, one column per family.
std::string FormatEvalTable(const EvalReport& report);

}  // namespace groundkit

#endif  // GROUNDKIT_SIM_EVAL_H_
