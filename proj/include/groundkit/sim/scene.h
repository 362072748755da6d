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

// 2D tabletop scenes. Coordinates are centimeters with the origin at the
// top-left corner of the overhead view and y growing toward the robot, so
// "front" is the bottom of the image and "back" the top.

#ifndef GROUNDKIT_SIM_SCENE_H_
#define GROUNDKIT_SIM_SCENE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "groundkit/core/box.h"
#include "groundkit/core/image.h"
#include "groundkit/core/random.h"

namespace groundkit {

enum class SimFamily {
  kIrregular,
  kOod,
  kClutter,
  kEggPick,
  kEggPlace,
  kPlainPlace,
};

// "irregular", "ood", "clutter", "egg-pick", "egg-place", "plain-place".
std::string_view SimFamilyName(SimFamily family);
std::optional<SimFamily> ParseSimFamily(std::string_view name);
const std::vector<SimFamily>& AllSimFamilies();

enum class SimTask { kPick, kPlace };
std::string_view SimTaskName(SimTask task);
SimTask TaskOf(SimFamily family);

enum class ObjectShape { kCircle, kRectangle, kBlob };
std::string_view ObjectShapeName(ObjectShape shape);

struct PointCm {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PointCm&, const PointCm&) = default;
};

double Distance(const PointCm& a, const PointCm& b);

// Axis-aligned rectangle in centimeters.
struct RectCm {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double Area() const;
  PointCm Center() const;
  friend bool operator==(const RectCm&, const RectCm&) = default;
};

double RectIou(const RectCm& a, const RectCm& b);

struct SimObject {
  int id = 0;
  std::string class_name;
  std::string color_name;
  Rgb rgb;
  ObjectShape shape = ObjectShape::kCircle;
  PointCm center;
  // Half extents of the footprint; a circle uses half_w as its radius.
  double half_w = 1.0;
  double half_h = 1.0;

  RectCm Footprint() const;
  friend bool operator==(const SimObject&, const SimObject&) = default;
};

// Rows are numbered from the back of the table (top of the image), columns
// from the left, both 1-based in text and 0-based here.
struct GridTray {
  std::string name;  // "left" or "right".
  PointCm origin;    // Top-left corner.
  int rows = 1;
  int cols = 1;
  double pitch_cm = 5.0;
  std::vector<int> occupancy;  // rows * cols object ids, -1 when empty.

  PointCm CellCenter(int row, int col) const;
  int& At(int row, int col) { return occupancy[row * cols + col]; }
  int At(int row, int col) const { return occupancy[row * cols + col]; }
  RectCm Bounds() const;
  friend bool operator==(const GridTray&, const GridTray&) = default;
};

struct SlotRef {
  int tray = 0;  // Index into Scene::trays.
  int row = 0;
  int col = 0;

  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

enum class TargetRule {
  kRandom,  // Target or goal drawn uniformly.
  kMure,    // Layout built so the family's minimal referring text is unique.
};

struct SceneParams {
  double table_width_cm = 60.0;
  double table_height_cm = 40.0;
  double px_per_cm = 10.0;
  int num_objects = 6;  // clutter, irregular, ood.
  int tray_rows = 3;
  int tray_cols = 4;
  double tray_pitch_cm = 5.0;
  int empty_slots = 3;  // egg-place.
  TargetRule target_rule = TargetRule::kRandom;

  absl::Status Validate(SimFamily family) const;
};

struct Scene {
  SimFamily family = SimFamily::kClutter;
  uint64_t seed = 0;
  double table_width_cm = 60.0;
  double table_height_cm = 40.0;
  double px_per_cm = 10.0;
  std::vector<SimObject> objects;
  std::vector<GridTray> trays;

  // Ground truth. Pick families set target_id; place families set goal, and
  // egg-place also sets goal_slot.
  int target_id = -1;
  std::optional<PointCm> goal;
  std::optional<SlotRef> goal_slot;

  // Minimal referring text for the target. Unique when the scene was built
  // with TargetRule::kMure; for random targets it may still be ambiguous.
  std::string mure_text;
  // The short phrasing a user types without spatial detail.
  std::string coarse_text;

  SimTask task() const { return TaskOf(family); }
  int width_px() const;
  int height_px() const;
  PointCm RobotHome() const;  // Front center of the table.
  const SimObject* FindObject(int id) const;
  // Tray cell holding object `id`, if any.
  std::optional<SlotRef> SlotOf(int id) const;

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Seeded, deterministic scene. Fails with ResourceExhausted when objects
// cannot be packed after bounded retries.
absl::StatusOr<Scene> GenScene(SimFamily family, const SceneParams& params,
                               uint64_t seed);

// Same layout with a fresh target or goal. A no-op for kMure scenes.
Scene ResampleTarget(const Scene& scene, TargetRule rule, Rng& rng);

// Orthographic top-down raster. Never contains the marker color.
ImageBuffer RenderOverhead(const Scene& scene);

// Conversions between centimeters and the overhead raster.
NormBox RectToNorm(const Scene& scene, const RectCm& rect);
RectCm PixelToRect(const Scene& scene, const PixelBox& box);

// Tight box around an object's footprint.
absl::StatusOr<NormBox> ObjectBox(const Scene& scene, int object_id);
// Square of `side_cm` centered on `point`, clipped to the table.
NormBox PointBox(const Scene& scene, const PointCm& point,
                 double side_cm = 5.0);
// Box a user would draw for the scene's ground truth.
absl::StatusOr<NormBox> GroundTruthBox(const Scene& scene);

// Quadrant phrase ("upper-left", ...) for a point.
std::string QuadrantName(const Scene& scene, const PointCm& p);

std::string SceneToJson(const Scene& scene);

}  // namespace groundkit

#endif  // GROUNDKIT_SIM_SCENE_H_
