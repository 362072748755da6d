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

#ifndef GROUNDKIT_SIM_SPATIAL_H_
#define GROUNDKIT_SIM_SPATIAL_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "groundkit/sim/scene.h"

namespace groundkit {

enum class ConstraintKind {
  kClass,
  kColor,
  kShape,
  kRegion,
  kOrdinal,
  kGrid,
  kAnchor,
};

enum class Region {
  kUpperLeft,
  kUpperRight,
  kLowerLeft,
  kLowerRight,
  kLeftHalf,
  kRightHalf,
  kUpperHalf,
  kLowerHalf,
  kCenter,
};

enum class Ordinal {
  kFromLeft,   // rank 1 is the leftmost.
  kFromRight,  // rank 1 is the rightmost.
  kFrontmost,  // Largest y, closest to the robot edge.
  kBackmost,
  kNearest,    // Closest to the robot home.
  kFarthest,
};

enum class Relation {
  kLeftOf,
  kRightOf,
  kInFrontOf,
  kBehind,
  kNextTo,
  kFarthestFrom,
  kBetween,
};

// Grid positions are 1-based; 0 means unconstrained. kLastIndex and
// kMiddleIndex resolve against the tray size.
inline constexpr int kLastIndex = -1;
inline constexpr int kMiddleIndex = -2;

struct GridRef {
  int row = 0;
  int col = 0;
  std::string tray;  // "left", "right" or empty for any tray.

  friend bool operator==(const GridRef&, const GridRef&) = default;
};

struct SpatialConstraint {
  ConstraintKind kind = ConstraintKind::kClass;
  std::string name;  // Class or color name.
  ObjectShape shape = ObjectShape::kCircle;
  Region region = Region::kCenter;
  Ordinal ordinal = Ordinal::kFromLeft;
  int rank = 1;
  GridRef grid;
  Relation relation = Relation::kNextTo;
  std::vector<std::string> anchors;  // Anchor class names.

  friend bool operator==(const SpatialConstraint&,
                         const SpatialConstraint&) = default;
};

struct SpatialQuery {
  SimTask action = SimTask::kPick;
  std::vector<SpatialConstraint> constraints;
  // "empty slot" / "empty location" was mentioned.
  bool wants_empty = false;

  // Constraints of one kind, in text order.
  std::vector<const SpatialConstraint*> OfKind(ConstraintKind kind) const;
};

// Class names the text policy understands. Anything else is ignored.
const std::vector<std::string>& KnownClassNames();
const std::vector<std::string>& KnownColorNames();

// Case-insensitive grammar over directional, grid, relative/ordinal and
// region terms. Unknown words are skipped. Fails only when no action verb
// (pick/grab/take/lift or place/put/drop/set/insert) is present.
absl::StatusOr<SpatialQuery> ParseSpatialText(std::string_view text);

std::string_view RegionName(Region region);
std::string_view OrdinalName(Ordinal ordinal);
std::string_view RelationName(Relation relation);
std::string SpatialQueryToJson(const SpatialQuery& query);

}  // namespace groundkit

#endif  // GROUNDKIT_SIM_SPATIAL_H_
