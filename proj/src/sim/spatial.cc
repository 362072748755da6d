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

#include "groundkit/sim/spatial.h"

#include <algorithm>
#include <cctype>
#include <optional>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace groundkit {
namespace {

const std::vector<std::string>& PickVerbs() {
  static const std::vector<std::string> k = {"pick", "grab", "grasp",
                                             "take", "lift", "get"};
  return k;
}

const std::vector<std::string>& PlaceVerbs() {
  static const std::vector<std::string> k = {"place", "put", "drop", "set",
                                             "insert"};
  return k;
}

bool Contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<std::string> AsClass(const std::string& tok) {
  if (Contains(KnownClassNames(), tok)) return tok;
  if (tok.size() > 1 && tok.back() == 's') {
    std::string stem = tok.substr(0, tok.size() - 1);
    if (Contains(KnownClassNames(), stem)) return stem;
    if (tok.size() > 2 && tok.compare(tok.size() - 2, 2, "es") == 0) {
      stem = tok.substr(0, tok.size() - 2);
      if (Contains(KnownClassNames(), stem)) return stem;
    }
  }
  return std::nullopt;
}

std::optional<std::string> AsColor(const std::string& tok) {
  if (tok == "grey") return std::string("gray");
  if (Contains(KnownColorNames(), tok)) return tok;
  return std::nullopt;
}

std::optional<ObjectShape> AsShape(const std::string& tok) {
  static const std::vector<std::string> kRect = {"rectangular", "rectangle",
                                                 "square", "boxy"};
  static const std::vector<std::string> kCircle = {"round", "circular",
                                                   "circle", "cylindrical"};
  static const std::vector<std::string> kBlob = {"irregular", "blob", "blobby",
                                                 "lumpy"};
  if (Contains(kRect, tok)) return ObjectShape::kRectangle;
  if (Contains(kCircle, tok)) return ObjectShape::kCircle;
  if (Contains(kBlob, tok)) return ObjectShape::kBlob;
  return std::nullopt;
}

// "first".."tenth", "1st".."10th", "last".
std::optional<int> AsOrdinalWord(const std::string& tok) {
  static const std::vector<std::string> kWords = {
      "first", "second", "third",   "fourth", "fifth",
      "sixth", "seventh", "eighth", "ninth",  "tenth"};
  for (size_t i = 0; i < kWords.size(); ++i) {
    if (tok == kWords[i]) return static_cast<int>(i) + 1;
  }
  if (tok == "last") return kLastIndex;
  if (tok.size() >= 3 && std::isdigit(static_cast<unsigned char>(tok[0]))) {
    const std::string suffix = tok.substr(tok.size() - 2);
    if (suffix == "st" || suffix == "nd" || suffix == "rd" || suffix == "th") {
      int n = 0;
      for (size_t i = 0; i + 2 < tok.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) {
          return std::nullopt;
        }
        n = n * 10 + (tok[i] - '0');
      }
      return n;
    }
  }
  return std::nullopt;
}

// "1".."99" or "one".."ten".
std::optional<int> AsNumber(const std::string& tok) {
  static const std::vector<std::string> kWords = {
      "one", "two", "three", "four", "five",
      "six", "seven", "eight", "nine", "ten"};
  for (size_t i = 0; i < kWords.size(); ++i) {
    if (tok == kWords[i]) return static_cast<int>(i) + 1;
  }
  if (tok.empty() || tok.size() > 2) return std::nullopt;
  int n = 0;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    n = n * 10 + (c - '0');
  }
  return n > 0 ? std::optional<int>(n) : std::nullopt;
}

bool IsUpperWord(const std::string& t) {
  return t == "upper" || t == "top" || t == "back" || t == "rear";
}

bool IsLowerWord(const std::string& t) {
  return t == "lower" || t == "bottom" || t == "front";
}

bool IsArticle(const std::string& t) {
  return t == "the" || t == "a" || t == "an" || t == "and";
}

class Parser {
 public:
  explicit Parser(std::vector<std::string> tokens)
      : toks_(std::move(tokens)) {}

  absl::StatusOr<SpatialQuery> Run() {
    bool have_action = false;
    for (const std::string& t : toks_) {
      if (Contains(PickVerbs(), t)) {
        q_.action = SimTask::kPick;
        have_action = true;
        break;
      }
      if (Contains(PlaceVerbs(), t)) {
        q_.action = SimTask::kPlace;
        have_action = true;
        break;
      }
    }
    if (!have_action) {
      return absl::InvalidArgumentError(
          "no action verb: expected pick/grab/take/lift or "
          "place/put/drop/set/insert");
    }
    size_t i = 0;
    while (i < toks_.size()) i = Step(i);
    if (grid_.row != 0 || grid_.col != 0 || !grid_.tray.empty()) {
      SpatialConstraint c;
      c.kind = ConstraintKind::kGrid;
      c.grid = grid_;
      q_.constraints.push_back(std::move(c));
    }
    return q_;
  }

 private:
  const std::string& At(size_t i) const {
    static const std::string kEmpty;
    return i < toks_.size() ? toks_[i] : kEmpty;
  }

  // Index of the next token that is not an article.
  size_t SkipArticles(size_t i) const {
    while (i < toks_.size() && IsArticle(toks_[i])) ++i;
    return i;
  }

  // Reads an anchor class starting at `i`, skipping articles, colors and
  // shape words. Returns the index after the class.
  std::optional<std::pair<std::string, size_t>> ReadAnchor(size_t i) const {
    for (size_t j = i; j < toks_.size() && j < i + 5; ++j) {
      if (std::optional<std::string> cls = AsClass(toks_[j])) {
        return std::make_pair(*cls, j + 1);
      }
      if (!IsArticle(toks_[j]) && !AsColor(toks_[j]) && !AsShape(toks_[j])) {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  void AddRegion(Region r) {
    SpatialConstraint c;
    c.kind = ConstraintKind::kRegion;
    c.region = r;
    q_.constraints.push_back(std::move(c));
  }

  void AddOrdinal(Ordinal o, int rank = 1) {
    SpatialConstraint c;
    c.kind = ConstraintKind::kOrdinal;
    c.ordinal = o;
    c.rank = rank;
    q_.constraints.push_back(std::move(c));
  }

  // Adds an anchor relation if a class follows; returns the next index.
  size_t AddRelation(Relation r, size_t after) {
    std::optional<std::pair<std::string, size_t>> a = ReadAnchor(after);
    if (!a) return after;
    SpatialConstraint c;
    c.kind = ConstraintKind::kAnchor;
    c.relation = r;
    c.anchors.push_back(a->first);
    size_t next = a->second;
    if (r == Relation::kBetween) {
      std::optional<std::pair<std::string, size_t>> b = ReadAnchor(next);
      if (!b) return next;
      c.anchors.push_back(b->first);
      next = b->second;
    }
    q_.constraints.push_back(std::move(c));
    return next;
  }

  size_t Step(size_t i) {
    const std::string& t = toks_[i];
    const std::string& n1 = At(i + 1);

    if (t == "far" && (n1 == "left" || n1 == "right")) {
      AddOrdinal(n1 == "left" ? Ordinal::kFromLeft : Ordinal::kFromRight);
      return i + 2;
    }
    if (t == "leftmost" || t == "rightmost") {
      if (n1 == "column" || n1 == "col") {
        grid_.col = t == "leftmost" ? 1 : kLastIndex;
        return i + 2;
      }
      AddOrdinal(t == "leftmost" ? Ordinal::kFromLeft : Ordinal::kFromRight);
      return i + 1;
    }
    if (t == "frontmost") {
      AddOrdinal(Ordinal::kFrontmost);
      return i + 1;
    }
    if (t == "backmost" || t == "rearmost") {
      AddOrdinal(Ordinal::kBackmost);
      return i + 1;
    }
    if (t == "middle" || t == "center" || t == "centre") {
      if (n1 == "column" || n1 == "col") {
        grid_.col = kMiddleIndex;
        return i + 2;
      }
      if (n1 == "row") {
        grid_.row = kMiddleIndex;
        return i + 2;
      }
      AddRegion(Region::kCenter);
      return i + 1;
    }
    if (std::optional<int> ord = AsOrdinalWord(t)) {
      if (n1 == "row") {
        grid_.row = *ord;
        return i + 2;
      }
      if (n1 == "column" || n1 == "col") {
        grid_.col = *ord;
        return i + 2;
      }
      // "<ordinal> [class] from the left|right".
      for (size_t j = i + 1; j < toks_.size() && j <= i + 3; ++j) {
        if (toks_[j] != "from") continue;
        const size_t k = SkipArticles(j + 1);
        if (At(k) == "left" || At(k) == "right") {
          if (std::optional<std::string> cls = AsClass(At(i + 1))) {
            AddClass(*cls);
          }
          AddOrdinal(At(k) == "left" ? Ordinal::kFromLeft : Ordinal::kFromRight,
                     *ord == kLastIndex ? 1 : *ord);
          return k + 1;
        }
      }
      return i + 1;
    }
    if (t == "row" || t == "column" || t == "col") {
      if (std::optional<int> num = AsNumber(n1)) {
        (t == "row" ? grid_.row : grid_.col) = *num;
        return i + 2;
      }
      return i + 1;
    }
    if ((t == "top" || t == "bottom") && n1 == "row") {
      grid_.row = t == "top" ? 1 : kLastIndex;
      return i + 2;
    }
    if (t == "in" && n1 == "front" && At(i + 2) == "of") {
      return AddRelation(Relation::kInFrontOf, i + 3);
    }
    if (IsUpperWord(t) || IsLowerWord(t)) {
      const bool upper = IsUpperWord(t);
      if (n1 == "left" || n1 == "right") {
        const bool left = n1 == "left";
        AddRegion(upper ? (left ? Region::kUpperLeft : Region::kUpperRight)
                        : (left ? Region::kLowerLeft : Region::kLowerRight));
        return i + 2;
      }
      AddRegion(upper ? Region::kUpperHalf : Region::kLowerHalf);
      return i + 1;
    }
    if (t == "left" || t == "right") {
      const bool left = t == "left";
      if (n1 == "tray") {
        grid_.tray = t;
        return i + 2;
      }
      if (n1 == "of") {
        return AddRelation(left ? Relation::kLeftOf : Relation::kRightOf,
                           i + 2);
      }
      AddRegion(left ? Region::kLeftHalf : Region::kRightHalf);
      return i + 1;
    }
    if (t == "behind") return AddRelation(Relation::kBehind, i + 1);
    if ((t == "next" || t == "adjacent") && n1 == "to") {
      return AddRelation(Relation::kNextTo, i + 2);
    }
    if (t == "beside" || t == "near" || t == "by") {
      return AddRelation(Relation::kNextTo, i + 1);
    }
    if (t == "closest" || t == "nearest") {
      if (n1 == "to") return AddRelation(Relation::kNextTo, i + 2);
      AddOrdinal(Ordinal::kNearest);
      return i + 1;
    }
    if (t == "farthest" || t == "furthest") {
      if (n1 == "from") return AddRelation(Relation::kFarthestFrom, i + 2);
      AddOrdinal(Ordinal::kFarthest);
      return i + 1;
    }
    if (t == "between") return AddRelation(Relation::kBetween, i + 1);
    if (t == "empty" || t == "vacant" || t == "free") {
      q_.wants_empty = true;
      return i + 1;
    }
    if (std::optional<std::string> cls = AsClass(t)) {
      AddClass(*cls);
      return i + 1;
    }
    if (std::optional<std::string> color = AsColor(t)) {
      if (q_.OfKind(ConstraintKind::kColor).empty()) {
        SpatialConstraint c;
        c.kind = ConstraintKind::kColor;
        c.name = *color;
        q_.constraints.push_back(std::move(c));
      }
      return i + 1;
    }
    if (std::optional<ObjectShape> shape = AsShape(t)) {
      if (q_.OfKind(ConstraintKind::kShape).empty()) {
        SpatialConstraint c;
        c.kind = ConstraintKind::kShape;
        c.shape = *shape;
        q_.constraints.push_back(std::move(c));
      }
      return i + 1;
    }
    return i + 1;
  }

  void AddClass(const std::string& cls) {
    if (!q_.OfKind(ConstraintKind::kClass).empty()) return;
    SpatialConstraint c;
    c.kind = ConstraintKind::kClass;
    c.name = cls;
    q_.constraints.push_back(std::move(c));
  }

  std::vector<std::string> toks_;
  SpatialQuery q_;
  GridRef grid_;
};

}  // namespace

std::vector<const SpatialConstraint*> SpatialQuery::OfKind(
    ConstraintKind kind) const {
  std::vector<const SpatialConstraint*> out;
  for (const SpatialConstraint& c : constraints) {
    if (c.kind == kind) out.push_back(&c);
  }
  return out;
}

const std::vector<std::string>& KnownClassNames() {
  static const std::vector<std::string> k = {
      "bottle", "egg",  "block", "cup",  "ball",  "can",  "box",
      "bowl",   "mug",  "cube",  "apple", "banana", "plate", "marker"};
  return k;
}

const std::vector<std::string>& KnownColorNames() {
  static const std::vector<std::string> k = {
      "red",   "green", "blue",   "yellow", "purple", "black",
      "white", "orange", "brown", "gray",   "pink"};
  return k;
}

absl::StatusOr<SpatialQuery> ParseSpatialText(std::string_view text) {
  return Parser(Tokenize(text)).Run();
}

std::string_view RegionName(Region region) {
  switch (region) {
    case Region::kUpperLeft:
      return "upper-left";
    case Region::kUpperRight:
      return "upper-right";
    case Region::kLowerLeft:
      return "lower-left";
    case Region::kLowerRight:
      return "lower-right";
    case Region::kLeftHalf:
      return "left";
    case Region::kRightHalf:
      return "right";
    case Region::kUpperHalf:
      return "upper";
    case Region::kLowerHalf:
      return "lower";
    case Region::kCenter:
      return "center";
  }
  return "unknown";
}

std::string_view OrdinalName(Ordinal ordinal) {
  switch (ordinal) {
    case Ordinal::kFromLeft:
      return "from-left";
    case Ordinal::kFromRight:
      return "from-right";
    case Ordinal::kFrontmost:
      return "frontmost";
    case Ordinal::kBackmost:
      return "backmost";
    case Ordinal::kNearest:
      return "nearest";
    case Ordinal::kFarthest:
      return "farthest";
  }
  return "unknown";
}

std::string_view RelationName(Relation relation) {
  switch (relation) {
    case Relation::kLeftOf:
      return "left-of";
    case Relation::kRightOf:
      return "right-of";
    case Relation::kInFrontOf:
      return "in-front-of";
    case Relation::kBehind:
      return "behind";
    case Relation::kNextTo:
      return "next-to";
    case Relation::kFarthestFrom:
      return "farthest-from";
    case Relation::kBetween:
      return "between";
  }
  return "unknown";
}

std::string SpatialQueryToJson(const SpatialQuery& query) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["action"] = std::string(SimTaskName(query.action));
  j["wants_empty"] = query.wants_empty;
  Json cs = Json::array();
  for (const SpatialConstraint& c : query.constraints) {
    Json e;
    switch (c.kind) {
      case ConstraintKind::kClass:
        e = {{"kind", "class"}, {"name", c.name}};
        break;
      case ConstraintKind::kColor:
        e = {{"kind", "color"}, {"name", c.name}};
        break;
      case ConstraintKind::kShape:
        e = {{"kind", "shape"}, {"shape", std::string(ObjectShapeName(c.shape))}};
        break;
      case ConstraintKind::kRegion:
        e = {{"kind", "region"}, {"region", std::string(RegionName(c.region))}};
        break;
      case ConstraintKind::kOrdinal:
        e = {{"kind", "ordinal"},
             {"ordinal", std::string(OrdinalName(c.ordinal))},
             {"rank", c.rank}};
        break;
      case ConstraintKind::kGrid:
        e = {{"kind", "grid"},
             {"row", c.grid.row},
             {"column", c.grid.col},
             {"tray", c.grid.tray}};
        break;
      case ConstraintKind::kAnchor:
        e = {{"kind", "anchor"},
             {"relation", std::string(RelationName(c.relation))},
             {"anchors", c.anchors}};
        break;
    }
    cs.push_back(std::move(e));
  }
  j["constraints"] = std::move(cs);
  return j.dump();
}

}  // namespace groundkit
