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

#include "groundkit/sim/scene.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "absl/strings/str_cat.h"
#include "groundkit/render/render.h"
#include "json.hpp"

namespace groundkit {
namespace {

constexpr Rgb kTableColor{196, 170, 130};
constexpr Rgb kTrayColor{150, 150, 150};
constexpr Rgb kSlotColor{105, 105, 105};

constexpr int kMaxPlacementTries = 2000;
constexpr double kClutterRadiusCm = 2.5;
constexpr double kClearanceCm = 1.0;
constexpr double kMinBlobSpacingCm = 3.0;

struct NamedColor {
  const char* name;
  Rgb rgb;
};

constexpr NamedColor kPalette[] = {
    {"red", {200, 40, 40}},      {"green", {50, 150, 60}},
    {"blue", {40, 80, 200}},     {"yellow", {225, 200, 40}},
    {"purple", {120, 40, 150}},  {"black", {25, 25, 25}},
    {"white", {240, 238, 228}},  {"orange", {235, 130, 30}},
    {"brown", {120, 80, 45}},    {"gray", {130, 130, 130}},
};

const std::vector<std::string> kIrregularColors = {
    "purple", "green", "blue", "yellow", "orange", "brown"};
const std::vector<std::string> kOodColors = {"black",  "white",  "blue",
                                             "green",  "yellow", "orange",
                                             "purple"};
// Classes the text policy has no word for.
const std::vector<std::string> kOodClasses = {"stapler", "sponge",  "remote",
                                              "charger", "wallet", "whisk"};

Rgb ColorRgb(const std::string& name) {
  for (const NamedColor& c : kPalette) {
    if (name == c.name) return c.rgb;
  }
  return kPalette[std::size(kPalette) - 1].rgb;
}

const std::string& Pick(Rng& rng, const std::vector<std::string>& v) {
  return v[UniformInt(rng, 0, static_cast<int64_t>(v.size()) - 1)];
}

SimObject MakeObject(int id, std::string class_name, std::string color,
                     ObjectShape shape, PointCm center, double hw,
                     double hh) {
  SimObject o;
  o.id = id;
  o.class_name = std::move(class_name);
  o.rgb = ColorRgb(color);
  o.color_name = std::move(color);
  o.shape = shape;
  o.center = center;
  o.half_w = hw;
  o.half_h = shape == ObjectShape::kCircle ? hw : hh;
  return o;
}

bool InQuadrant(const Scene& s, const PointCm& p, bool upper, bool left) {
  const bool is_upper = p.y < 0.5 * s.table_height_cm;
  const bool is_left = p.x < 0.5 * s.table_width_cm;
  return is_upper == upper && is_left == left;
}

bool RectsClear(const RectCm& a, const RectCm& b, double gap) {
  return a.x_max + gap <= b.x_min || b.x_max + gap <= a.x_min ||
         a.y_max + gap <= b.y_min || b.y_max + gap <= a.y_min;
}

std::string OrdinalWord(int n) {
  static const char* kWords[] = {"first",   "second", "third", "fourth",
                                 "fifth",   "sixth",  "seventh", "eighth",
                                 "ninth",   "tenth"};
  if (n >= 1 && n <= 10) return kWords[n - 1];
  return absl::StrCat(n, "th");
}

void BuildTrays(Scene& s, const SceneParams& p) {
  const double tw = p.tray_cols * p.tray_pitch_cm;
  const double th = p.tray_rows * p.tray_pitch_cm;
  for (int i = 0; i < 2; ++i) {
    GridTray t;
    t.name = i == 0 ? "left" : "right";
    const double cx = s.table_width_cm * (i == 0 ? 0.25 : 0.75);
    t.origin = {cx - 0.5 * tw, 0.5 * s.table_height_cm - 0.5 * th};
    t.rows = p.tray_rows;
    t.cols = p.tray_cols;
    t.pitch_cm = p.tray_pitch_cm;
    t.occupancy.assign(static_cast<size_t>(t.rows * t.cols), -1);
    s.trays.push_back(std::move(t));
  }
}

// Fills every tray cell not in `empty` with an egg, ids in tray/row/col
// order.
void FillEggs(Scene& s, const std::vector<SlotRef>& empty) {
  int id = 0;
  for (int ti = 0; ti < static_cast<int>(s.trays.size()); ++ti) {
    GridTray& t = s.trays[ti];
    for (int r = 0; r < t.rows; ++r) {
      for (int c = 0; c < t.cols; ++c) {
        if (std::find(empty.begin(), empty.end(), SlotRef{ti, r, c}) !=
            empty.end()) {
          continue;
        }
        t.At(r, c) = id;
        s.objects.push_back(MakeObject(id, "egg", "white",
                                       ObjectShape::kCircle,
                                       t.CellCenter(r, c), 0.4 * t.pitch_cm,
                                       0.4 * t.pitch_cm));
        ++id;
      }
    }
  }
}

std::vector<SlotRef> AllSlots(const Scene& s) {
  std::vector<SlotRef> out;
  for (int ti = 0; ti < static_cast<int>(s.trays.size()); ++ti) {
    for (int r = 0; r < s.trays[ti].rows; ++r) {
      for (int c = 0; c < s.trays[ti].cols; ++c) out.push_back({ti, r, c});
    }
  }
  return out;
}

std::vector<SlotRef> EmptySlots(const Scene& s) {
  std::vector<SlotRef> out;
  for (const SlotRef& ref : AllSlots(s)) {
    if (s.trays[ref.tray].At(ref.row, ref.col) < 0) out.push_back(ref);
  }
  return out;
}

void Describe(Scene& s) {
  s.mure_text.clear();
  s.coarse_text.clear();
  const SimObject* target = s.FindObject(s.target_id);
  switch (s.family) {
    case SimFamily::kClutter: {
      s.coarse_text = "Pick the bottle.";
      if (target == nullptr) break;
      int rank_left = 1;
      int rank_right = 1;
      for (const SimObject& o : s.objects) {
        if (o.center.x < target->center.x) ++rank_left;
        if (o.center.x > target->center.x) ++rank_right;
      }
      if (rank_right == 1) {
        s.mure_text = "Pick the bottle on the far right of the cluster.";
      } else if (rank_left == 1) {
        s.mure_text = "Pick the bottle on the far left of the cluster.";
      } else {
        s.mure_text = absl::StrCat("Pick the ", OrdinalWord(rank_left),
                                   " bottle from the left.");
      }
      break;
    }
    case SimFamily::kEggPick: {
      s.coarse_text = "Pick the egg.";
      const std::optional<SlotRef> slot = s.SlotOf(s.target_id);
      if (!slot) break;
      s.mure_text = absl::StrCat("Pick the egg in the ",
                                 s.trays[slot->tray].name, " tray, row ",
                                 slot->row + 1, ", column ", slot->col + 1,
                                 ".");
      break;
    }
    case SimFamily::kEggPlace: {
      s.coarse_text = "Place the egg into the empty slot.";
      if (!s.goal_slot) break;
      const SlotRef& g = *s.goal_slot;
      s.mure_text = absl::StrCat("Place the egg into the empty slot in the ",
                                 s.trays[g.tray].name, " tray, row ",
                                 g.row + 1, ", column ", g.col + 1, ".");
      break;
    }
    case SimFamily::kPlainPlace: {
      if (!s.goal) break;
      const std::string q = QuadrantName(s, *s.goal);
      s.mure_text = absl::StrCat("Place the object at the empty location in the ",
                                 q, " area of the tabletop.");
      s.coarse_text =
          absl::StrCat("Place the object in the ", q, " area of the tabletop.");
      break;
    }
    case SimFamily::kIrregular: {
      if (target == nullptr) break;
      const bool upper = target->center.y < 0.5 * s.table_height_cm;
      const bool left = target->center.x < 0.5 * s.table_width_cm;
      s.mure_text = absl::StrCat("Pick the ", target->color_name,
                                 " object in the ", upper ? "back" : "front",
                                 "-", left ? "left" : "right",
                                 " region of the workspace.");
      s.coarse_text = absl::StrCat("Pick the ", target->color_name, " object.");
      break;
    }
    case SimFamily::kOod: {
      if (target == nullptr) break;
      s.mure_text = absl::StrCat(
          "Pick the ", target->color_name, " ",
          target->shape == ObjectShape::kRectangle ? "rectangular" : "round",
          " object in the ", QuadrantName(s, target->center), " area.");
      s.coarse_text = absl::StrCat("Pick the ", target->class_name, ".");
      break;
    }
  }
}

absl::Status PackingError(SimFamily family, int placed, int wanted) {
  return absl::ResourceExhaustedError(
      absl::StrCat("infeasible packing: placed ", placed, " of ", wanted, " ",
                   std::string(SimFamilyName(family)), " objects"));
}

absl::Status GenClutter(Scene& s, const SceneParams& p, Rng& rng) {
  const double r = kClutterRadiusCm;
  const double x0 = 0.2 * s.table_width_cm + r;
  const double x1 = 0.8 * s.table_width_cm - r;
  const double y0 = 0.2 * s.table_height_cm + r;
  const double y1 = 0.8 * s.table_height_cm - r;
  for (int i = 0; i < p.num_objects; ++i) {
    bool placed = false;
    for (int t = 0; t < kMaxPlacementTries && !placed; ++t) {
      const PointCm c{UniformReal(rng, x0, x1), UniformReal(rng, y0, y1)};
      placed = std::all_of(s.objects.begin(), s.objects.end(),
                           [&](const SimObject& o) {
                             return Distance(o.center, c) >=
                                    2 * r + kClearanceCm;
                           });
      if (placed) {
        s.objects.push_back(MakeObject(i, "bottle", "green",
                                       ObjectShape::kCircle, c, r, r));
      }
    }
    if (!placed) return PackingError(s.family, i, p.num_objects);
  }
  if (p.target_rule == TargetRule::kMure) {
    const auto it = std::max_element(
        s.objects.begin(), s.objects.end(),
        [](const SimObject& a, const SimObject& b) {
          return a.center.x < b.center.x;
        });
    s.target_id = it->id;
  }
  return absl::OkStatus();
}

absl::Status GenIrregular(Scene& s, const SceneParams& p, Rng& rng) {
  const double w = s.table_width_cm;
  const double h = s.table_height_cm;
  const bool mure = p.target_rule == TargetRule::kMure;
  for (int i = 0; i < p.num_objects; ++i) {
    const double hw = UniformReal(rng, 2.0, 4.0);
    const double hh = UniformReal(rng, 2.0, 4.0);
    std::string color = Pick(rng, kIrregularColors);
    bool placed = false;
    for (int t = 0; t < kMaxPlacementTries && !placed; ++t) {
      PointCm c;
      if (mure && i == 0) {
        c = {UniformReal(rng, hw, 0.5 * w), UniformReal(rng, 0.5 * h, h - hh)};
      } else {
        c = {UniformReal(rng, hw, w - hw), UniformReal(rng, hh, h - hh)};
      }
      placed = std::all_of(s.objects.begin(), s.objects.end(),
                           [&](const SimObject& o) {
                             return Distance(o.center, c) >= kMinBlobSpacingCm;
                           });
      if (!placed) continue;
      if (mure) {
        if (i == 0) {
          color = "purple";
        } else if (color == "purple" && InQuadrant(s, c, false, true)) {
          color = "green";
        }
      }
      s.objects.push_back(MakeObject(i, "object", color, ObjectShape::kBlob, c,
                                     hw, hh));
    }
    if (!placed) return PackingError(s.family, i, p.num_objects);
  }
  if (mure) s.target_id = 0;
  return absl::OkStatus();
}

absl::Status GenOod(Scene& s, const SceneParams& p, Rng& rng) {
  const double w = s.table_width_cm;
  const double h = s.table_height_cm;
  const bool mure = p.target_rule == TargetRule::kMure;
  for (int i = 0; i < p.num_objects; ++i) {
    ObjectShape shape = UniformUnit(rng) < 0.5 ? ObjectShape::kRectangle
                                               : ObjectShape::kCircle;
    if (mure && i == 0) shape = ObjectShape::kRectangle;
    double hw;
    double hh;
    if (shape == ObjectShape::kRectangle) {
      hw = UniformReal(rng, 1.5, 4.0);
      hh = UniformReal(rng, 1.5, 4.0);
    } else {
      hw = hh = UniformReal(rng, 1.5, 3.0);
    }
    const std::string& cls = Pick(rng, kOodClasses);
    std::string color = Pick(rng, kOodColors);
    bool placed = false;
    for (int t = 0; t < kMaxPlacementTries && !placed; ++t) {
      PointCm c;
      if (mure && i == 0) {
        c = {UniformReal(rng, hw, 0.5 * w), UniformReal(rng, 0.5 * h, h - hh)};
      } else {
        c = {UniformReal(rng, hw, w - hw), UniformReal(rng, hh, h - hh)};
      }
      SimObject o = MakeObject(i, cls, color, shape, c, hw, hh);
      placed = std::all_of(s.objects.begin(), s.objects.end(),
                           [&](const SimObject& other) {
                             return RectsClear(o.Footprint(),
                                               other.Footprint(), kClearanceCm);
                           });
      if (!placed) continue;
      if (mure) {
        if (i == 0) {
          color = "black";
        } else if (color == "black" && shape == ObjectShape::kRectangle &&
                   InQuadrant(s, c, false, true)) {
          color = "white";
        }
      }
      s.objects.push_back(MakeObject(i, cls, color, shape, c, hw, hh));
    }
    if (!placed) return PackingError(s.family, i, p.num_objects);
  }
  if (mure) s.target_id = 0;
  return absl::OkStatus();
}

void GenEggs(Scene& s, const SceneParams& p, Rng& rng) {
  BuildTrays(s, p);
  const bool mure = p.target_rule == TargetRule::kMure;
  const SlotRef mure_pick{1, 1, 2};   // Right tray, row 2, column 3.
  const SlotRef mure_place{1, 0, 2};  // Right tray, row 1, column 3.
  if (s.family == SimFamily::kEggPick) {
    FillEggs(s, {});
    if (mure) s.target_id = s.trays[1].At(mure_pick.row, mure_pick.col);
    return;
  }
  std::vector<SlotRef> slots = AllSlots(s);
  std::vector<SlotRef> empty;
  if (mure) {
    empty.push_back(mure_place);
    slots.erase(std::find(slots.begin(), slots.end(), mure_place));
  }
  const size_t more = static_cast<size_t>(p.empty_slots) - empty.size();
  for (size_t i : SampleWithoutReplacement(rng, slots.size(), more)) {
    empty.push_back(slots[i]);
  }
  FillEggs(s, empty);
  if (mure) {
    s.goal_slot = mure_place;
    s.goal = s.trays[1].CellCenter(mure_place.row, mure_place.col);
  }
}

void DrawFootprint(ImageBuffer& img, const Scene& s, const RectCm& r,
                   const std::function<bool(double, double)>& inside,
                   Rgb color) {
  const double k = s.px_per_cm;
  const int x0 = std::max(0, static_cast<int>(std::floor(r.x_min * k)));
  const int y0 = std::max(0, static_cast<int>(std::floor(r.y_min * k)));
  const int x1 = std::min(img.width(), static_cast<int>(std::ceil(r.x_max * k)));
  const int y1 =
      std::min(img.height(), static_cast<int>(std::ceil(r.y_max * k)));
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (inside((x + 0.5) / k, (y + 0.5) / k)) img.Set(x, y, color);
    }
  }
}

bool InsideEllipse(double dx, double dy, double a, double b) {
  return (dx * dx) / (a * a) + (dy * dy) / (b * b) <= 1.0;
}

// Lumpy outline: a core ellipse plus two bumps, mirrored by id parity.
bool InsideBlob(const SimObject& o, double x, double y) {
  const double dx = x - o.center.x;
  const double dy = y - o.center.y;
  if (InsideEllipse(dx, dy, 0.8 * o.half_w, 0.8 * o.half_h)) return true;
  const double br = 0.55 * std::min(o.half_w, o.half_h);
  const double sx = (o.id % 2 == 0) ? 1.0 : -1.0;
  const double bx1 = sx * 0.45 * o.half_w;
  const double by1 = -0.35 * o.half_h;
  const double bx2 = -sx * 0.35 * o.half_w;
  const double by2 = 0.4 * o.half_h;
  return InsideEllipse(dx - bx1, dy - by1, br, br) ||
         InsideEllipse(dx - bx2, dy - by2, br, br);
}

}  // namespace

std::string_view SimFamilyName(SimFamily family) {
  switch (family) {
    case SimFamily::kIrregular:
      return "irregular";
    case SimFamily::kOod:
      return "ood";
    case SimFamily::kClutter:
      return "clutter";
    case SimFamily::kEggPick:
      return "egg-pick";
    case SimFamily::kEggPlace:
      return "egg-place";
    case SimFamily::kPlainPlace:
      return "plain-place";
  }
  return "unknown";
}

std::optional<SimFamily> ParseSimFamily(std::string_view name) {
  for (SimFamily f : AllSimFamilies()) {
    if (SimFamilyName(f) == name) return f;
  }
  return std::nullopt;
}

const std::vector<SimFamily>& AllSimFamilies() {
  static const std::vector<SimFamily> kAll = {
      SimFamily::kIrregular, SimFamily::kOod,      SimFamily::kClutter,
      SimFamily::kEggPick,   SimFamily::kEggPlace, SimFamily::kPlainPlace};
  return kAll;
}

std::string_view SimTaskName(SimTask task) {
  return task == SimTask::kPick ? "pick" : "place";
}

SimTask TaskOf(SimFamily family) {
  return family == SimFamily::kEggPlace || family == SimFamily::kPlainPlace
             ? SimTask::kPlace
             : SimTask::kPick;
}

std::string_view ObjectShapeName(ObjectShape shape) {
  switch (shape) {
    case ObjectShape::kCircle:
      return "circle";
    case ObjectShape::kRectangle:
      return "rectangle";
    case ObjectShape::kBlob:
      return "blob";
  }
  return "unknown";
}

double Distance(const PointCm& a, const PointCm& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double RectCm::Area() const {
  return std::max(0.0, x_max - x_min) * std::max(0.0, y_max - y_min);
}

PointCm RectCm::Center() const {
  return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)};
}

double RectIou(const RectCm& a, const RectCm& b) {
  const RectCm inter{std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min),
                     std::min(a.x_max, b.x_max), std::min(a.y_max, b.y_max)};
  const double i = inter.Area();
  const double u = a.Area() + b.Area() - i;
  return u > 0.0 ? i / u : 0.0;
}

RectCm SimObject::Footprint() const {
  return {center.x - half_w, center.y - half_h, center.x + half_w,
          center.y + half_h};
}

PointCm GridTray::CellCenter(int row, int col) const {
  return {origin.x + (col + 0.5) * pitch_cm, origin.y + (row + 0.5) * pitch_cm};
}

RectCm GridTray::Bounds() const {
  return {origin.x, origin.y, origin.x + cols * pitch_cm,
          origin.y + rows * pitch_cm};
}

absl::Status SceneParams::Validate(SimFamily family) const {
  if (!(table_width_cm > 0 && table_height_cm > 0 && px_per_cm > 0)) {
    return absl::InvalidArgumentError("table size and scale must be positive");
  }
  const double wpx = table_width_cm * px_per_cm;
  const double hpx = table_height_cm * px_per_cm;
  if (wpx < 8 || hpx < 8 || wpx * hpx > 64e6) {
    return absl::InvalidArgumentError(
        absl::StrCat("overhead raster size out of range: ", wpx, "x", hpx));
  }
  switch (family) {
    case SimFamily::kClutter:
    case SimFamily::kIrregular:
    case SimFamily::kOod:
      if (num_objects < 1 || num_objects > 200) {
        return absl::InvalidArgumentError(
            absl::StrCat("num_objects must be in [1, 200], got ", num_objects));
      }
      break;
    case SimFamily::kEggPick:
    case SimFamily::kEggPlace: {
      if (tray_rows < 1 || tray_cols < 1 || tray_pitch_cm <= 0) {
        return absl::InvalidArgumentError("tray rows, cols and pitch must be "
                                          "positive");
      }
      if (tray_cols * tray_pitch_cm > 0.5 * table_width_cm ||
          tray_rows * tray_pitch_cm > table_height_cm) {
        return absl::InvalidArgumentError("trays do not fit on the table");
      }
      if (target_rule == TargetRule::kMure &&
          (tray_rows < 2 || tray_cols < 3)) {
        return absl::InvalidArgumentError(
            "minimal referring egg scenes need trays of at least 2x3");
      }
      if (family == SimFamily::kEggPlace &&
          (empty_slots < 1 || empty_slots > 2 * tray_rows * tray_cols)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "empty_slots must be in [1, ", 2 * tray_rows * tray_cols,
            "], got ", empty_slots));
      }
      break;
    }
    case SimFamily::kPlainPlace:
      break;
  }
  return absl::OkStatus();
}

int Scene::width_px() const {
  return static_cast<int>(std::lround(table_width_cm * px_per_cm));
}

int Scene::height_px() const {
  return static_cast<int>(std::lround(table_height_cm * px_per_cm));
}

PointCm Scene::RobotHome() const {
  return {0.5 * table_width_cm, table_height_cm};
}

const SimObject* Scene::FindObject(int id) const {
  for (const SimObject& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

std::optional<SlotRef> Scene::SlotOf(int id) const {
  if (id < 0) return std::nullopt;
  for (int ti = 0; ti < static_cast<int>(trays.size()); ++ti) {
    const GridTray& t = trays[ti];
    for (int r = 0; r < t.rows; ++r) {
      for (int c = 0; c < t.cols; ++c) {
        if (t.At(r, c) == id) return SlotRef{ti, r, c};
      }
    }
  }
  return std::nullopt;
}

absl::StatusOr<Scene> GenScene(SimFamily family, const SceneParams& params,
                               uint64_t seed) {
  if (absl::Status st = params.Validate(family); !st.ok()) return st;
  Scene s;
  s.family = family;
  s.seed = seed;
  s.table_width_cm = params.table_width_cm;
  s.table_height_cm = params.table_height_cm;
  s.px_per_cm = params.px_per_cm;
  Rng rng(DeriveSeed(seed, "sim.scene"));
  absl::Status st;
  switch (family) {
    case SimFamily::kClutter:
      st = GenClutter(s, params, rng);
      break;
    case SimFamily::kIrregular:
      st = GenIrregular(s, params, rng);
      break;
    case SimFamily::kOod:
      st = GenOod(s, params, rng);
      break;
    case SimFamily::kEggPick:
    case SimFamily::kEggPlace:
      GenEggs(s, params, rng);
      break;
    case SimFamily::kPlainPlace:
      if (params.target_rule == TargetRule::kMure) {
        s.goal = PointCm{0.75 * s.table_width_cm, 0.25 * s.table_height_cm};
      }
      break;
  }
  if (!st.ok()) return st;
  if (params.target_rule == TargetRule::kRandom) {
    Rng target_rng(DeriveSeed(seed, "sim.target"));
    return ResampleTarget(s, TargetRule::kRandom, target_rng);
  }
  Describe(s);
  return s;
}

Scene ResampleTarget(const Scene& scene, TargetRule rule, Rng& rng) {
  Scene s = scene;
  if (rule == TargetRule::kMure) return s;
  switch (s.family) {
    case SimFamily::kClutter:
    case SimFamily::kIrregular:
    case SimFamily::kOod:
    case SimFamily::kEggPick:
      if (!s.objects.empty()) {
        s.target_id = s.objects[UniformInt(
                                    rng, 0,
                                    static_cast<int64_t>(s.objects.size()) - 1)]
                          .id;
      }
      break;
    case SimFamily::kEggPlace: {
      const std::vector<SlotRef> empty = EmptySlots(s);
      if (!empty.empty()) {
        const SlotRef g =
            empty[UniformInt(rng, 0, static_cast<int64_t>(empty.size()) - 1)];
        s.goal_slot = g;
        s.goal = s.trays[g.tray].CellCenter(g.row, g.col);
      }
      break;
    }
    case SimFamily::kPlainPlace: {
      const double x = UniformReal(rng, 0.0, s.table_width_cm);
      const double y = UniformReal(rng, 0.0, s.table_height_cm);
      s.goal = PointCm{x, y};
      break;
    }
  }
  Describe(s);
  return s;
}

ImageBuffer RenderOverhead(const Scene& scene) {
  ImageBuffer img(scene.width_px(), scene.height_px(), kTableColor);
  for (const GridTray& t : scene.trays) {
    DrawFootprint(img, scene, t.Bounds(),
                  [](double, double) { return true; }, kTrayColor);
    const double sr = 0.45 * t.pitch_cm;
    for (int r = 0; r < t.rows; ++r) {
      for (int c = 0; c < t.cols; ++c) {
        const PointCm cc = t.CellCenter(r, c);
        DrawFootprint(img, scene, {cc.x - sr, cc.y - sr, cc.x + sr, cc.y + sr},
                      [&](double x, double y) {
                        return InsideEllipse(x - cc.x, y - cc.y, sr, sr);
                      },
                      kSlotColor);
      }
    }
  }
  for (const SimObject& o : scene.objects) {
    std::function<bool(double, double)> inside;
    switch (o.shape) {
      case ObjectShape::kCircle:
        inside = [&o](double x, double y) {
          return InsideEllipse(x - o.center.x, y - o.center.y, o.half_w,
                               o.half_w);
        };
        break;
      case ObjectShape::kRectangle:
        inside = [](double, double) { return true; };
        break;
      case ObjectShape::kBlob:
        inside = [&o](double x, double y) { return InsideBlob(o, x, y); };
        break;
    }
    DrawFootprint(img, scene, o.Footprint(), inside, o.rgb);
  }
  ReserveMarkerColor(img);
  return img;
}

NormBox RectToNorm(const Scene& scene, const RectCm& rect) {
  auto fx = [&](double v) {
    return std::clamp(v / scene.table_width_cm, 0.0, 1.0);
  };
  auto fy = [&](double v) {
    return std::clamp(v / scene.table_height_cm, 0.0, 1.0);
  };
  return NormBox{fx(rect.x_min), fy(rect.y_min), fx(rect.x_max),
                 fy(rect.y_max)};
}

RectCm PixelToRect(const Scene& scene, const PixelBox& box) {
  const double k = scene.px_per_cm;
  return {box.x_min / k, box.y_min / k, box.x_max / k, box.y_max / k};
}

absl::StatusOr<NormBox> ObjectBox(const Scene& scene, int object_id) {
  const SimObject* o = scene.FindObject(object_id);
  if (o == nullptr) {
    return absl::NotFoundError(absl::StrCat("no object with id ", object_id));
  }
  return RectToNorm(scene, o->Footprint());
}

NormBox PointBox(const Scene& scene, const PointCm& point, double side_cm) {
  const double h = 0.5 * side_cm;
  const double x0 = std::clamp(point.x - h, 0.0, scene.table_width_cm - h);
  const double y0 = std::clamp(point.y - h, 0.0, scene.table_height_cm - h);
  const double x1 = std::clamp(point.x + h, h, scene.table_width_cm);
  const double y1 = std::clamp(point.y + h, h, scene.table_height_cm);
  return RectToNorm(scene, {x0, y0, x1, y1});
}

absl::StatusOr<NormBox> GroundTruthBox(const Scene& scene) {
  if (scene.task() == SimTask::kPick) return ObjectBox(scene, scene.target_id);
  if (!scene.goal) return absl::FailedPreconditionError("scene has no goal");
  return PointBox(scene, *scene.goal);
}

std::string QuadrantName(const Scene& scene, const PointCm& p) {
  const bool upper = p.y < 0.5 * scene.table_height_cm;
  const bool left = p.x < 0.5 * scene.table_width_cm;
  return absl::StrCat(upper ? "upper" : "lower", "-", left ? "left" : "right");
}

std::string SceneToJson(const Scene& scene) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["family"] = std::string(SimFamilyName(scene.family));
  j["task"] = std::string(SimTaskName(scene.task()));
  j["seed"] = scene.seed;
  j["table"] = {{"width_cm", scene.table_width_cm},
                {"height_cm", scene.table_height_cm},
                {"px_per_cm", scene.px_per_cm},
                {"width_px", scene.width_px()},
                {"height_px", scene.height_px()}};
  Json objects = Json::array();
  for (const SimObject& o : scene.objects) {
    const NormBox b = RectToNorm(scene, o.Footprint());
    objects.push_back({{"id", o.id},
                       {"class", o.class_name},
                       {"color", o.color_name},
                       {"shape", std::string(ObjectShapeName(o.shape))},
                       {"center_cm", {o.center.x, o.center.y}},
                       {"half_extents_cm", {o.half_w, o.half_h}},
                       {"box", {b.x_min, b.y_min, b.x_max, b.y_max}}});
  }
  j["objects"] = std::move(objects);
  Json trays = Json::array();
  for (const GridTray& t : scene.trays) {
    trays.push_back({{"name", t.name},
                     {"origin_cm", {t.origin.x, t.origin.y}},
                     {"rows", t.rows},
                     {"cols", t.cols},
                     {"pitch_cm", t.pitch_cm},
                     {"occupancy", t.occupancy}});
  }
  j["trays"] = std::move(trays);
  j["target_id"] = scene.target_id >= 0 ? Json(scene.target_id) : Json();
  j["goal_cm"] =
      scene.goal ? Json::array({scene.goal->x, scene.goal->y}) : Json();
  if (scene.goal_slot) {
    j["goal_slot"] = {{"tray", scene.trays[scene.goal_slot->tray].name},
                      {"row", scene.goal_slot->row + 1},
                      {"column", scene.goal_slot->col + 1}};
  } else {
    j["goal_slot"] = nullptr;
  }
  j["mure_text"] = scene.mure_text;
  j["coarse_text"] = scene.coarse_text;
  return j.dump(2);
}

}  // namespace groundkit
