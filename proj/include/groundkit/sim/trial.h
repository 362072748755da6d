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

// Scripted reference policies and the trial protocol.

#ifndef GROUNDKIT_SIM_TRIAL_H_
#define GROUNDKIT_SIM_TRIAL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "groundkit/core/image.h"
#include "groundkit/sim/scene.h"
#include "groundkit/sim/spatial.h"

namespace groundkit {

enum class PolicyKind { kText, kGrounded };
std::string_view PolicyKindName(PolicyKind policy);
std::optional<PolicyKind> ParsePolicyKind(std::string_view name);

enum class FailureReason {
  kNone,
  kWrongTarget,
  kNoReferent,
  kAmbiguousUnresolved,
  kTimeout,
  kOutOfTolerance,
};
// "none", "wrong-target", "no-referent", "ambiguous-unresolved", "timeout",
// "out-of-tolerance".
std::string_view FailureReasonName(FailureReason reason);

struct TrialProtocol {
  int max_retries = 2;
  double timeout_s = 30.0;
  double place_tolerance_cm = 10.0;
  int trials_per_scene = 30;
  // Retries redraw from the candidates not yet tried. Set to allow repeats.
  bool retry_with_replacement = false;
  // Simulated clock per attempt: fixed + per_10cm * travel / 10.
  double attempt_fixed_s = 2.0;
  double attempt_per_10cm_s = 0.5;

  absl::Status Validate() const;
};

// One thing a policy can act on: an object for pick, a point for place.
struct SimTarget {
  int object_id = -1;
  PointCm point;

  friend bool operator==(const SimTarget&, const SimTarget&) = default;
};

// Everything a policy would be willing to try, in a fixed order.
struct PolicyDecision {
  SimTask action = SimTask::kPick;
  std::vector<SimTarget> candidates;
  // Why there are no candidates.
  FailureReason failure = FailureReason::kNone;
};

// Text policy: filters by the parsed constraints. Pick candidates are the
// objects that survive; place resolves to empty tray slots, a region
// centroid or an anchor-relative point. Place with nothing to go on is
// ambiguous-unresolved; no survivors is no-referent.
PolicyDecision TextPolicyCandidates(const Scene& scene,
                                    const SpatialQuery& query);
absl::StatusOr<PolicyDecision> TextPolicyDecide(const Scene& scene,
                                                std::string_view text);

// Grounded policy: reads the marker box from `grounded_image`. Pick returns
// the object whose footprint has the largest IoU with the box (ties go to
// the nearest centroid); place returns the box center. The action comes
// from the scene. Never looks at object names.
PolicyDecision GroundedPolicyDecide(const Scene& scene,
                                    const ImageBuffer& grounded_image);

// Overhead render with the marker drawn at `box`.
ImageBuffer MakeGroundedImage(const Scene& scene, const NormBox& box);

struct TrialInput {
  PolicyKind policy = PolicyKind::kText;
  std::string text;            // Text policy instruction.
  ImageBuffer grounded_image;  // Grounded policy observation.
};

struct AttemptTrace {
  int attempt = 1;
  SimTarget target;
  double time_s = 0.0;  // Cumulative.
  FailureReason outcome = FailureReason::kNone;
};

struct TrialResult {
  bool success = false;
  int attempts = 0;
  FailureReason failure_reason = FailureReason::kNone;
  std::optional<SimTarget> chosen;  // Last target acted on.
  double elapsed_s = 0.0;
  std::vector<AttemptTrace> trace;
};

// Runs the protocol. Each attempt draws uniformly from the remaining
// candidates; a failed attempt retries up to max_retries times while
// candidates remain. Exceeding timeout_s ends the trial as a timeout.
// Errors only for an unparseable text instruction or an invalid protocol.
absl::StatusOr<TrialResult> RunTrial(const Scene& scene,
                                     const TrialInput& input,
                                     const TrialProtocol& protocol,
                                     uint64_t seed);

// Evaluates a single action against the ground truth.
FailureReason JudgeTarget(const Scene& scene, SimTask action,
                          const SimTarget& target,
                          const TrialProtocol& protocol);

std::string TrialResultToJson(const TrialResult& result);

}  // namespace groundkit

#endif  // GROUNDKIT_SIM_TRIAL_H_
