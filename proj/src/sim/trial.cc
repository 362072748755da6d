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

#include "groundkit/sim/trial.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "groundkit/core/random.h"
#include "groundkit/core/status_macros.h"
#include "groundkit/render/render.h"
#include "json.hpp"

namespace groundkit {
namespace {

constexpr double kTieEps = 1e-9;
constexpr double kAnchorGapCm = 5.0;

using ObjectList = std::vector<const SimObject*>;

bool InRegion(const Scene& s, Region r, const PointCm& p) {
  const double w = s.table_width_cm;
  const double h = s.table_height_cm;
  const bool upper = p.y < 0.5 * h;
  const bool left = p.x < 0.5 * w;
  switch (r) {
    case Region::kUpperLeft:
      return upper && left;
    case Region::kUpperRight:
      return upper && !left;
    case Region::kLowerLeft:
      return !upper && left;
    case Region::kLowerRight:
      return !upper && !left;
    case Region::kLeftHalf:
      return left;
    case Region::kRightHalf:
      return !left;
    case Region::kUpperHalf:
      return upper;
    case Region::kLowerHalf:
      return !upper;
    case Region::kCenter:
      return p.x >= 0.25 * w && p.x <= 0.75 * w && p.y >= 0.25 * h &&
             p.y <= 0.75 * h;
  }
  return false;
}

PointCm RegionCentroid(const Scene& s, Region r) {
  const double w = s.table_width_cm;
  const double h = s.table_height_cm;
  switch (r) {
    case Region::kUpperLeft:
      return {0.25 * w, 0.25 * h};
    case Region::kUpperRight:
      return {0.75 * w, 0.25 * h};
    case Region::kLowerLeft:
      return {0.25 * w, 0.75 * h};
    case Region::kLowerRight:
      return {0.75 * w, 0.75 * h};
    case Region::kLeftHalf:
      return {0.25 * w, 0.5 * h};
    case Region::kRightHalf:
      return {0.75 * w, 0.5 * h};
    case Region::kUpperHalf:
      return {0.5 * w, 0.25 * h};
    case Region::kLowerHalf:
      return {0.5 * w, 0.75 * h};
    case Region::kCenter:
      return {0.5 * w, 0.5 * h};
  }
  return {0.5 * w, 0.5 * h};
}

// Resolves a 1-based grid index (or kLastIndex / kMiddleIndex) to 0-based;
// -1 when out of range, `any` when unconstrained.
int ResolveIndex(int index, int size, int any) {
  if (index == 0) return any;
  if (index == kLastIndex) return size - 1;
  if (index == kMiddleIndex) return (size - 1) / 2;
  return index >= 1 && index <= size ? index - 1 : -1;
}

bool SlotMatches(const Scene& s, const SlotRef& ref, const GridRef& g) {
  const GridTray& t = s.trays[ref.tray];
  if (!g.tray.empty() && g.tray != t.name) return false;
  constexpr int kAny = -2;
  const int r = ResolveIndex(g.row, t.rows, kAny);
  const int c = ResolveIndex(g.col, t.cols, kAny);
  return (r == kAny || r == ref.row) && (c == kAny || c == ref.col);
}

template <typename Pred>
ObjectList Filter(const ObjectList& in, Pred pred) {
  ObjectList out;
  for (const SimObject* o : in) {
    if (pred(*o)) out.push_back(o);
  }
  return out;
}

// Keeps every object whose key is within kTieEps of the best (smallest).
template <typename Key>
ObjectList ArgMin(const ObjectList& in, Key key) {
  double best = std::numeric_limits<double>::infinity();
  for (const SimObject* o : in) best = std::min(best, key(*o));
  return Filter(in, [&](const SimObject& o) { return key(o) <= best + kTieEps; });
}

ObjectList ObjectsOfClass(const Scene& s, const std::string& cls) {
  ObjectList out;
  for (const SimObject& o : s.objects) {
    if (o.class_name == cls) out.push_back(&o);
  }
  return out;
}

double MinDistance(const SimObject& o, const ObjectList& anchors) {
  double d = std::numeric_limits<double>::infinity();
  for (const SimObject* a : anchors) d = std::min(d, Distance(o.center, a->center));
  return d;
}

ObjectList ApplyAnchor(const Scene& s, const ObjectList& in,
                       const SpatialConstraint& c) {
  const ObjectList anchors = ObjectsOfClass(s, c.anchors[0]);
  ObjectList others;
  if (c.relation == Relation::kBetween && c.anchors.size() > 1) {
    others = ObjectsOfClass(s, c.anchors[1]);
  }
  auto is_anchor = [&](const SimObject& o) {
    return std::find(anchors.begin(), anchors.end(), &o) != anchors.end() ||
           std::find(others.begin(), others.end(), &o) != others.end();
  };
  const ObjectList cands =
      Filter(in, [&](const SimObject& o) { return !is_anchor(o); });
  if (anchors.empty()) return {};
  auto any_anchor = [&](auto pred) {
    return Filter(cands, [&](const SimObject& o) {
      return std::any_of(anchors.begin(), anchors.end(),
                         [&](const SimObject* a) { return pred(o, *a); });
    });
  };
  switch (c.relation) {
    case Relation::kLeftOf:
      return any_anchor([](const SimObject& o, const SimObject& a) {
        return o.center.x < a.center.x;
      });
    case Relation::kRightOf:
      return any_anchor([](const SimObject& o, const SimObject& a) {
        return o.center.x > a.center.x;
      });
    case Relation::kInFrontOf:
      return any_anchor([](const SimObject& o, const SimObject& a) {
        return o.center.y > a.center.y;
      });
    case Relation::kBehind:
      return any_anchor([](const SimObject& o, const SimObject& a) {
        return o.center.y < a.center.y;
      });
    case Relation::kNextTo:
      return ArgMin(cands,
                    [&](const SimObject& o) { return MinDistance(o, anchors); });
    case Relation::kFarthestFrom:
      return ArgMin(cands, [&](const SimObject& o) {
        return -MinDistance(o, anchors);
      });
    case Relation::kBetween: {
      if (others.empty()) return {};
      // Perpendicular distance to the closest anchor segment the object
      // projects inside of.
      auto key = [&](const SimObject& o) {
        double best = std::numeric_limits<double>::infinity();
        for (const SimObject* a : anchors) {
          for (const SimObject* b : others) {
            if (a == b) continue;
            const double vx = b->center.x - a->center.x;
            const double vy = b->center.y - a->center.y;
            const double len2 = vx * vx + vy * vy;
            if (len2 <= 0) continue;
            const double t = ((o.center.x - a->center.x) * vx +
                              (o.center.y - a->center.y) * vy) /
                             len2;
            if (t <= 0 || t >= 1) continue;
            const PointCm proj{a->center.x + t * vx, a->center.y + t * vy};
            best = std::min(best, Distance(o.center, proj));
          }
        }
        return best;
      };
      ObjectList inside = Filter(cands, [&](const SimObject& o) {
        return std::isfinite(key(o));
      });
      return inside.empty() ? inside : ArgMin(inside, key);
    }
  }
  return {};
}

ObjectList ApplyOrdinal(const Scene& s, const ObjectList& in,
                        const SpatialConstraint& c) {
  if (in.empty()) return in;
  const PointCm home = s.RobotHome();
  switch (c.ordinal) {
    case Ordinal::kFromLeft:
    case Ordinal::kFromRight: {
      const bool left = c.ordinal == Ordinal::kFromLeft;
      std::vector<double> xs;
      for (const SimObject* o : in) xs.push_back(o->center.x);
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end(),
                           [](double a, double b) {
                             return std::abs(a - b) <= kTieEps;
                           }),
               xs.end());
      if (c.rank < 1 || c.rank > static_cast<int>(xs.size())) return {};
      const double x = left ? xs[c.rank - 1] : xs[xs.size() - c.rank];
      return Filter(in, [&](const SimObject& o) {
        return std::abs(o.center.x - x) <= kTieEps;
      });
    }
    case Ordinal::kFrontmost:
      return ArgMin(in, [](const SimObject& o) { return -o.center.y; });
    case Ordinal::kBackmost:
      return ArgMin(in, [](const SimObject& o) { return o.center.y; });
    case Ordinal::kNearest:
      return ArgMin(in,
                    [&](const SimObject& o) { return Distance(o.center, home); });
    case Ordinal::kFarthest:
      return ArgMin(
          in, [&](const SimObject& o) { return -Distance(o.center, home); });
  }
  return in;
}

PointCm ClampToTable(const Scene& s, PointCm p) {
  p.x = std::clamp(p.x, 0.0, s.table_width_cm);
  p.y = std::clamp(p.y, 0.0, s.table_height_cm);
  return p;
}

std::vector<SimTarget> AnchorPoints(const Scene& s,
                                    const SpatialConstraint& c) {
  std::vector<SimTarget> out;
  const ObjectList anchors = ObjectsOfClass(s, c.anchors[0]);
  if (c.relation == Relation::kBetween) {
    if (c.anchors.size() < 2) return out;
    for (const SimObject* a : anchors) {
      for (const SimObject* b : ObjectsOfClass(s, c.anchors[1])) {
        if (a == b) continue;
        out.push_back({-1, {0.5 * (a->center.x + b->center.x),
                            0.5 * (a->center.y + b->center.y)}});
      }
    }
    return out;
  }
  for (const SimObject* a : anchors) {
    PointCm p = a->center;
    switch (c.relation) {
      case Relation::kLeftOf:
        p.x -= a->half_w + kAnchorGapCm;
        break;
      case Relation::kRightOf:
      case Relation::kNextTo:
        p.x += a->half_w + kAnchorGapCm;
        break;
      case Relation::kInFrontOf:
        p.y += a->half_h + kAnchorGapCm;
        break;
      case Relation::kBehind:
        p.y -= a->half_h + kAnchorGapCm;
        break;
      case Relation::kFarthestFrom:
      case Relation::kBetween:
        continue;
    }
    out.push_back({-1, ClampToTable(s, p)});
  }
  return out;
}

PolicyDecision PlaceCandidates(const Scene& s, const SpatialQuery& q) {
  PolicyDecision d;
  d.action = SimTask::kPlace;
  const auto grids = q.OfKind(ConstraintKind::kGrid);
  if (!s.trays.empty() && (!grids.empty() || q.wants_empty)) {
    const GridRef any;
    const GridRef& g = grids.empty() ? any : grids.front()->grid;
    for (int ti = 0; ti < static_cast<int>(s.trays.size()); ++ti) {
      const GridTray& t = s.trays[ti];
      for (int r = 0; r < t.rows; ++r) {
        for (int c = 0; c < t.cols; ++c) {
          if (t.At(r, c) < 0 && SlotMatches(s, {ti, r, c}, g)) {
            d.candidates.push_back({-1, t.CellCenter(r, c)});
          }
        }
      }
    }
    if (d.candidates.empty()) d.failure = FailureReason::kNoReferent;
    return d;
  }
  if (const auto regions = q.OfKind(ConstraintKind::kRegion);
      !regions.empty()) {
    d.candidates.push_back({-1, RegionCentroid(s, regions.front()->region)});
    return d;
  }
  if (const auto anchors = q.OfKind(ConstraintKind::kAnchor);
      !anchors.empty()) {
    d.candidates = AnchorPoints(s, *anchors.front());
    if (d.candidates.empty()) d.failure = FailureReason::kNoReferent;
    return d;
  }
  d.failure = FailureReason::kAmbiguousUnresolved;
  return d;
}

}  // namespace

std::string_view PolicyKindName(PolicyKind policy) {
  return policy == PolicyKind::kText ? "text" : "grounded";
}

std::optional<PolicyKind> ParsePolicyKind(std::string_view name) {
  if (name == "text") return PolicyKind::kText;
  if (name == "grounded") return PolicyKind::kGrounded;
  return std::nullopt;
}

std::string_view FailureReasonName(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone:
      return "none";
    case FailureReason::kWrongTarget:
      return "wrong-target";
    case FailureReason::kNoReferent:
      return "no-referent";
    case FailureReason::kAmbiguousUnresolved:
      return "ambiguous-unresolved";
    case FailureReason::kTimeout:
      return "timeout";
    case FailureReason::kOutOfTolerance:
      return "out-of-tolerance";
  }
  return "unknown";
}

absl::Status TrialProtocol::Validate() const {
  if (max_retries < 0) {
    return absl::InvalidArgumentError("max_retries must be >= 0");
  }
  if (!(timeout_s > 0) || !(place_tolerance_cm >= 0) ||
      trials_per_scene < 1 || !(attempt_fixed_s >= 0) ||
      !(attempt_per_10cm_s >= 0)) {
    return absl::InvalidArgumentError("invalid trial protocol");
  }
  return absl::OkStatus();
}

PolicyDecision TextPolicyCandidates(const Scene& scene,
                                    const SpatialQuery& query) {
  if (query.action == SimTask::kPlace) return PlaceCandidates(scene, query);
  PolicyDecision d;
  d.action = SimTask::kPick;
  ObjectList objs;
  for (const SimObject& o : scene.objects) objs.push_back(&o);
  for (const SpatialConstraint& c : query.constraints) {
    switch (c.kind) {
      case ConstraintKind::kClass:
        objs = Filter(objs, [&](const SimObject& o) {
          return o.class_name == c.name;
        });
        break;
      case ConstraintKind::kColor:
        objs = Filter(objs, [&](const SimObject& o) {
          return o.color_name == c.name;
        });
        break;
      case ConstraintKind::kShape:
        objs = Filter(objs,
                      [&](const SimObject& o) { return o.shape == c.shape; });
        break;
      case ConstraintKind::kRegion:
        objs = Filter(objs, [&](const SimObject& o) {
          return InRegion(scene, c.region, o.center);
        });
        break;
      case ConstraintKind::kAnchor:
        objs = ApplyAnchor(scene, objs, c);
        break;
      case ConstraintKind::kGrid:
        objs = Filter(objs, [&](const SimObject& o) {
          const std::optional<SlotRef> slot = scene.SlotOf(o.id);
          return slot && SlotMatches(scene, *slot, c.grid);
        });
        break;
      case ConstraintKind::kOrdinal:
        break;  // Applied last, over the filtered set.
    }
  }
  for (const SpatialConstraint* c : query.OfKind(ConstraintKind::kOrdinal)) {
    objs = ApplyOrdinal(scene, objs, *c);
  }
  for (const SimObject* o : objs) d.candidates.push_back({o->id, o->center});
  if (d.candidates.empty()) d.failure = FailureReason::kNoReferent;
  return d;
}

absl::StatusOr<PolicyDecision> TextPolicyDecide(const Scene& scene,
                                                std::string_view text) {
  GK_ASSIGN_OR_RETURN(SpatialQuery q, ParseSpatialText(text));
  return TextPolicyCandidates(scene, q);
}

PolicyDecision GroundedPolicyDecide(const Scene& scene,
                                    const ImageBuffer& grounded_image) {
  PolicyDecision d;
  d.action = scene.task();
  const int w = grounded_image.width();
  const int h = grounded_image.height();
  if (w != scene.width_px() || h != scene.height_px()) {
    d.failure = FailureReason::kNoReferent;
    return d;
  }
  absl::StatusOr<PixelBox> box =
      DetectOverlay(grounded_image, DefaultOverlayStyle(w, h));
  if (!box.ok()) {
    d.failure = FailureReason::kNoReferent;
    return d;
  }
  const RectCm rect = PixelToRect(scene, *box);
  if (d.action == SimTask::kPlace) {
    d.candidates.push_back({-1, rect.Center()});
    return d;
  }
  const SimObject* best = nullptr;
  double best_iou = 0.0;
  double best_dist = 0.0;
  for (const SimObject& o : scene.objects) {
    const double iou = RectIou(rect, o.Footprint());
    const double dist = Distance(o.center, rect.Center());
    if (iou <= 0.0) continue;
    if (best == nullptr || iou > best_iou + kTieEps ||
        (std::abs(iou - best_iou) <= kTieEps && dist < best_dist)) {
      best = &o;
      best_iou = iou;
      best_dist = dist;
    }
  }
  if (best == nullptr) {
    d.failure = FailureReason::kNoReferent;
    return d;
  }
  d.candidates.push_back({best->id, best->center});
  return d;
}

ImageBuffer MakeGroundedImage(const Scene& scene, const NormBox& box) {
  const ImageBuffer base = RenderOverhead(scene);
  return RenderOverlay(base, box,
                       DefaultOverlayStyle(base.width(), base.height()));
}

FailureReason JudgeTarget(const Scene& scene, SimTask action,
                          const SimTarget& target,
                          const TrialProtocol& protocol) {
  if (action != scene.task()) return FailureReason::kWrongTarget;
  if (action == SimTask::kPick) {
    return target.object_id >= 0 && target.object_id == scene.target_id
               ? FailureReason::kNone
               : FailureReason::kWrongTarget;
  }
  if (!scene.goal) return FailureReason::kWrongTarget;
  return Distance(target.point, *scene.goal) <= protocol.place_tolerance_cm
             ? FailureReason::kNone
             : FailureReason::kOutOfTolerance;
}

absl::StatusOr<TrialResult> RunTrial(const Scene& scene,
                                     const TrialInput& input,
                                     const TrialProtocol& protocol,
                                     uint64_t seed) {
  GK_RETURN_IF_ERROR(protocol.Validate());
  PolicyDecision decision;
  if (input.policy == PolicyKind::kText) {
    GK_ASSIGN_OR_RETURN(decision, TextPolicyDecide(scene, input.text));
  } else {
    if (input.grounded_image.empty()) {
      return absl::InvalidArgumentError(
          "grounded policy requires a grounded image");
    }
    decision = GroundedPolicyDecide(scene, input.grounded_image);
  }

  TrialResult result;
  if (decision.candidates.empty()) {
    result.attempts = 1;
    result.failure_reason = decision.failure;
    return result;
  }
  Rng rng(seed);
  std::vector<SimTarget> remaining = decision.candidates;
  const PointCm home = scene.RobotHome();
  double clock = 0.0;
  FailureReason last = FailureReason::kNone;
  for (int attempt = 1; attempt <= 1 + protocol.max_retries; ++attempt) {
    if (remaining.empty()) break;
    const size_t idx = static_cast<size_t>(
        UniformInt(rng, 0, static_cast<int64_t>(remaining.size()) - 1));
    const SimTarget target = remaining[idx];
    if (!protocol.retry_with_replacement) {
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    clock += protocol.attempt_fixed_s +
             protocol.attempt_per_10cm_s * Distance(home, target.point) / 10.0;
    AttemptTrace trace{attempt, target, clock, FailureReason::kNone};
    result.attempts = attempt;
    result.chosen = target;
    result.elapsed_s = clock;
    if (clock > protocol.timeout_s) {
      trace.outcome = FailureReason::kTimeout;
      result.trace.push_back(trace);
      result.failure_reason = FailureReason::kTimeout;
      return result;
    }
    trace.outcome = JudgeTarget(scene, decision.action, target, protocol);
    result.trace.push_back(trace);
    if (trace.outcome == FailureReason::kNone) {
      result.success = true;
      result.failure_reason = FailureReason::kNone;
      return result;
    }
    last = trace.outcome;
  }
  result.failure_reason = last;
  return result;
}

std::string TrialResultToJson(const TrialResult& result) {
  using Json = nlohmann::ordered_json;
  auto target_json = [](const SimTarget& t) {
    Json j;
    j["object_id"] = t.object_id >= 0 ? Json(t.object_id) : Json();
    j["point_cm"] = {t.point.x, t.point.y};
    return j;
  };
  Json j;
  j["success"] = result.success;
  j["attempts"] = result.attempts;
  j["failure_reason"] = std::string(FailureReasonName(result.failure_reason));
  j["chosen"] = result.chosen ? target_json(*result.chosen) : Json();
  j["elapsed_s"] = result.elapsed_s;
  Json trace = Json::array();
  for (const AttemptTrace& a : result.trace) {
    Json e;
    e["attempt"] = a.attempt;
    e["target"] = target_json(a.target);
    e["time_s"] = a.time_s;
    e["outcome"] = std::string(FailureReasonName(a.outcome));
    trace.push_back(std::move(e));
  }
  j["trace"] = std::move(trace);
  return j.dump();
}

}  // namespace groundkit
