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

#include "groundkit/service/service.h"

#include <optional>
#include <utility>
#include <vector>

#include "absl/strings/escaping.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "groundkit/annotate/annotate.h"
#include "groundkit/annotate/record.h"
#include "groundkit/core/image_io.h"
#include "groundkit/core/random.h"
#include "groundkit/core/version.h"
#include "groundkit/render/render.h"
#include "groundkit/sim/scene.h"
#include "json.hpp"

namespace groundkit {

using Json = nlohmann::ordered_json;

struct PendingInstruction {
  NormBox box;
  std::string text;
  std::string source;  // "ground" or "point-to-box".
};

struct BoxProposal {
  NormBox box;
  std::string label;
  std::string text;
  int region_count = 0;
};

struct Session {
  std::mutex mu;
  std::string id;
  uint64_t seed = 0;
  std::optional<Scene> scene;
  ImageBuffer image;
  std::string image_source;  // "scene", "upload" or empty.
  std::optional<PendingInstruction> pending;
  std::optional<BoxProposal> proposal;
  int scenes_created = 0;
  int trials_run = 0;
  Json history = Json::array();
};

namespace {

constexpr char kModelFailurePrefix[] = "model request failed";

HttpResponse Reply(const Json& body, int status = 200) {
  return HttpResponse{status, body.dump(2) + "\n"};
}

HttpResponse Error(int status, absl::string_view code, absl::string_view message,
                   Json detail = nullptr) {
  Json e;
  e["code"] = std::string(code);
  e["message"] = std::string(message);
  e["detail"] = std::move(detail);
  Json body;
  body["error"] = std::move(e);
  return Reply(body, status);
}

HttpResponse BadRequest(absl::string_view message) {
  return Error(400, "invalid-request", message);
}

Json BoxJson(const NormBox& b) {
  return Json{{"x_min", b.x_min},
              {"y_min", b.y_min},
              {"x_max", b.x_max},
              {"y_max", b.y_max}};
}

Json PixelBoxJson(const PixelBox& b) {
  return Json{{"x_min", b.x_min},
              {"y_min", b.y_min},
              {"x_max", b.x_max},
              {"y_max", b.y_max}};
}

std::string PngBase64(const ImageBuffer& image) {
  return absl::Base64Escape(EncodePng(image));
}

// Absent or empty body reads as {}.
std::optional<Json> ParseBody(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    return Json::object();
  }
  Json j = Json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

std::optional<std::string> OptString(const Json& j, const char* key,
                                     std::string* error) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    *error = absl::StrCat("field '", key, "' must be a string");
    return std::nullopt;
  }
  return it->get<std::string>();
}

std::optional<int64_t> OptInt(const Json& j, const char* key,
                              std::string* error) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) {
    *error = absl::StrCat("field '", key, "' must be an integer");
    return std::nullopt;
  }
  return it->get<int64_t>();
}

std::optional<uint64_t> OptSeed(const Json& j, const char* key,
                                std::string* error) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned()) {
    *error = absl::StrCat("field '", key, "' must be a non-negative integer");
    return std::nullopt;
  }
  return it->get<uint64_t>();
}

std::optional<NormBox> ParseBox(const Json& j, std::string* error) {
  if (!j.is_object()) {
    *error = "field 'box' must be an object with x_min, y_min, x_max, y_max";
    return std::nullopt;
  }
  NormBox b;
  const std::pair<const char*, double*> fields[] = {{"x_min", &b.x_min},
                                                    {"y_min", &b.y_min},
                                                    {"x_max", &b.x_max},
                                                    {"y_max", &b.y_max}};
  for (const auto& [name, dst] : fields) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_number()) {
      *error = absl::StrCat("box field '", name, "' must be a number");
      return std::nullopt;
    }
    *dst = it->get<double>();
  }
  return b;
}

// Error response for a box that cannot be drawn. NormToPixel always yields
// at least one pixel, so a valid NormBox is always drawable.
std::optional<HttpResponse> CheckBox(const NormBox& box) {
  if (absl::Status s = box.Validate(); !s.ok()) {
    const bool ordering = absl::StrContains(s.message(), "box ordering");
    return Error(422, ordering ? "box-ordering" : "invalid-box",
                 std::string(s.message()));
  }
  return std::nullopt;
}

std::optional<ImageBuffer> DecodeBase64Image(const std::string& b64,
                                             std::string* error) {
  std::string bytes;
  if (!absl::Base64Unescape(b64, &bytes)) {
    *error = "image is not valid base64";
    return std::nullopt;
  }
  absl::StatusOr<ImageBuffer> image = DecodeImage(bytes);
  if (!image.ok()) {
    *error = absl::StrCat("image could not be decoded: ", image.status().message());
    return std::nullopt;
  }
  return *std::move(image);
}

Json RawDetail(const absl::Status& s) {
  std::optional<std::string> raw = RawResponseOf(s);
  return Json{{"status", absl::StatusCodeToString(s.code())},
              {"raw_response", raw ? Json(*raw) : Json()}};
}

// Maps a model-backed operation failure onto the error table.
HttpResponse ModelError(const absl::Status& s) {
  if (absl::StrContains(s.message(), kModelFailurePrefix)) {
    return Error(502, "model-failure", std::string(s.message()), RawDetail(s));
  }
  if (s.code() == absl::StatusCode::kInvalidArgument) {
    const bool empty = absl::StrContains(s.message(), "no region returned");
    return Error(422, empty ? "no-region" : "parse-failure",
                 std::string(s.message()), RawDetail(s));
  }
  return Error(500, "internal", std::string(s.message()), RawDetail(s));
}

Json PendingJson(const std::optional<PendingInstruction>& p, int width,
                 int height) {
  if (!p) return nullptr;
  return Json{{"box", BoxJson(p->box)},
              {"pixel_box", PixelBoxJson(NormToPixel(p->box, width, height))},
              {"text", p->text},
              {"source", p->source}};
}

Json ProposalJson(const std::optional<BoxProposal>& p) {
  if (!p) return nullptr;
  return Json{{"box", BoxJson(p->box)},
              {"label", p->label},
              {"text", p->text},
              {"region_count", p->region_count}};
}

// Renders the pending instruction onto the session image.
Json GroundPreview(const Session& s) {
  const OverlayStyle style =
      DefaultOverlayStyle(s.image.width(), s.image.height());
  const ImageBuffer preview = RenderOverlay(s.image, s.pending->box, style);
  absl::StatusOr<PixelBox> detected = DetectOverlay(preview, style);
  Json j;
  j["session_id"] = s.id;
  j["pending"] = PendingJson(s.pending, s.image.width(), s.image.height());
  j["detected_pixel_box"] =
      detected.ok() ? PixelBoxJson(*detected) : Json(nullptr);
  j["preview_png_base64"] = PngBase64(preview);
  return j;
}

std::optional<TargetRule> ParseTargetRule(const std::string& s) {
  if (s == "random") return TargetRule::kRandom;
  if (s == "mure") return TargetRule::kMure;
  return std::nullopt;
}

enum class Route {
  kNone,
  kHealth,
  kSessions,
  kSession,
  kScene,
  kImage,
  kGround,
  kPointToBox,
  kConfirm,
  kTrial,
  kAnnotate,
};

struct Match {
  Route route = Route::kNone;
  std::string session_id;
  const char* method = "";
};

Match MatchRoute(std::string_view path) {
  std::vector<std::string> parts =
      absl::StrSplit(std::string(path), '/', absl::SkipEmpty());
  if (!parts.empty() && parts.front() == kApiVersion) {
    parts.erase(parts.begin());
  }
  const size_t n = parts.size();
  if (n == 1 && parts[0] == "health") return {Route::kHealth, "", "GET"};
  if (n == 1 && parts[0] == "annotate") return {Route::kAnnotate, "", "POST"};
  if (n == 0 || parts[0] != "sessions") return {};
  if (n == 1) return {Route::kSessions, "", "POST"};
  const std::string& id = parts[1];
  if (n == 2) return {Route::kSession, id, "GET"};
  if (n == 3 && parts[2] == "scene") return {Route::kScene, id, "POST"};
  if (n == 3 && parts[2] == "image") return {Route::kImage, id, "POST"};
  if (n == 3 && parts[2] == "ground") return {Route::kGround, id, "POST"};
  if (n == 3 && parts[2] == "trial") return {Route::kTrial, id, "POST"};
  if (parts[2] == "point-to-box") {
    if (n == 3) return {Route::kPointToBox, id, "POST"};
    if (n == 4 && parts[3] == "confirm") return {Route::kConfirm, id, "POST"};
  }
  return {};
}

// Handlers run with the session lock held.

HttpResponse HandleScene(Session& s, const Json& body) {
  std::string err;
  std::optional<std::string> family_name = OptString(body, "family", &err);
  if (!err.empty()) return BadRequest(err);
  if (!family_name) return Error(400, "invalid-family", "missing 'family'");
  std::optional<SimFamily> family = ParseSimFamily(*family_name);
  if (!family) {
    return Error(400, "invalid-family",
                 absl::StrCat("unknown family '", *family_name, "'"));
  }
  std::optional<uint64_t> seed = OptSeed(body, "seed", &err);
  if (!err.empty()) return BadRequest(err);

  SceneParams params;
  if (auto it = body.find("params"); it != body.end() && !it->is_null()) {
    if (!it->is_object()) return BadRequest("field 'params' must be an object");
    const std::pair<const char*, int*> ints[] = {
        {"num_objects", &params.num_objects},
        {"empty_slots", &params.empty_slots},
        {"tray_rows", &params.tray_rows},
        {"tray_cols", &params.tray_cols}};
    for (const auto& [name, dst] : ints) {
      std::optional<int64_t> v = OptInt(*it, name, &err);
      if (!err.empty()) return BadRequest(err);
      if (v) *dst = static_cast<int>(*v);
    }
    std::optional<std::string> rule = OptString(*it, "target_rule", &err);
    if (!err.empty()) return BadRequest(err);
    if (rule) {
      std::optional<TargetRule> r = ParseTargetRule(*rule);
      if (!r) {
        return BadRequest(absl::StrCat("unknown target_rule '", *rule,
                                       "' (random|mure)"));
      }
      params.target_rule = *r;
    }
  }
  if (absl::Status v = params.Validate(*family); !v.ok()) {
    return BadRequest(v.message());
  }
  const uint64_t scene_seed =
      seed ? *seed
           : DeriveSeed(s.seed, "scene", static_cast<uint64_t>(s.scenes_created));
  absl::StatusOr<Scene> scene = GenScene(*family, params, scene_seed);
  if (!scene.ok()) {
    if (scene.status().code() == absl::StatusCode::kResourceExhausted) {
      return Error(422, "infeasible-scene", scene.status().message());
    }
    return BadRequest(scene.status().message());
  }
  ++s.scenes_created;
  s.scene = *std::move(scene);
  s.image = RenderOverhead(*s.scene);
  s.image_source = "scene";
  s.pending.reset();
  s.proposal.reset();

  Json j;
  j["session_id"] = s.id;
  j["scene"] = Json::parse(SceneToJson(*s.scene));
  absl::StatusOr<NormBox> truth = GroundTruthBox(*s.scene);
  j["ground_truth_box"] = truth.ok() ? BoxJson(*truth) : Json(nullptr);
  j["width"] = s.image.width();
  j["height"] = s.image.height();
  j["image_png_base64"] = PngBase64(s.image);
  return Reply(j);
}

HttpResponse HandleImage(Session& s, const Json& body) {
  std::string err;
  std::optional<std::string> b64 = OptString(body, "image_png_base64", &err);
  if (!err.empty()) return BadRequest(err);
  if (!b64) return BadRequest("missing 'image_png_base64'");
  std::optional<ImageBuffer> image = DecodeBase64Image(*b64, &err);
  if (!image) return BadRequest(err);
  const int64_t adjusted = ReserveMarkerColor(*image);
  s.scene.reset();
  s.image = *std::move(image);
  s.image_source = "upload";
  s.pending.reset();
  s.proposal.reset();
  Json j;
  j["session_id"] = s.id;
  j["width"] = s.image.width();
  j["height"] = s.image.height();
  j["marker_pixels_adjusted"] = adjusted;
  return Reply(j);
}

HttpResponse HandleGround(Session& s, const Json& body) {
  if (s.image.empty()) {
    return Error(409, "no-active-scene", "session has no scene or image");
  }
  auto it = body.find("box");
  if (it == body.end()) return BadRequest("missing 'box'");
  std::string err;
  std::optional<NormBox> box = ParseBox(*it, &err);
  if (!box) return BadRequest(err);
  std::optional<std::string> text = OptString(body, "text", &err);
  if (!err.empty()) return BadRequest(err);
  if (std::optional<HttpResponse> e = CheckBox(*box)) return *e;
  s.pending = PendingInstruction{*box, text.value_or(""), "ground"};
  s.proposal.reset();
  return Reply(GroundPreview(s));
}

HttpResponse HandlePointToBox(Session& s, const Json& body,
                              const ServiceConfig& config) {
  if (!config.client) {
    return Error(503, "model-not-configured", "no model client configured");
  }
  std::string err;
  std::optional<std::string> text = OptString(body, "text", &err);
  if (!err.empty()) return BadRequest(err);
  if (!text || text->empty()) {
    return Error(400, "missing-instruction", "missing 'text'");
  }
  std::optional<std::string> b64 = OptString(body, "image_png_base64", &err);
  if (!err.empty()) return BadRequest(err);
  ImageBuffer query;
  if (b64) {
    std::optional<ImageBuffer> image = DecodeBase64Image(*b64, &err);
    if (!image) return BadRequest(err);
    query = *std::move(image);
  } else if (!s.image.empty()) {
    query = s.image;
  } else {
    return Error(409, "no-active-scene",
                 "no image in the request and none in the session");
  }
  absl::StatusOr<PointToBoxResult> result =
      PointToBox(query, *text, *config.client);
  if (!result.ok()) return ModelError(result.status());
  s.proposal = BoxProposal{result->box, result->label, *text,
                           result->region_count};
  Json j;
  j["session_id"] = s.id;
  j["proposal"] = ProposalJson(s.proposal);
  j["raw_response"] = result->raw_response;
  return Reply(j);
}

HttpResponse HandleConfirm(Session& s, const Json& body) {
  auto it = body.find("accept");
  if (it == body.end() || !it->is_boolean()) {
    return BadRequest("field 'accept' must be a boolean");
  }
  if (!s.proposal) {
    return Error(409, "no-pending-proposal", "no point-to-box proposal");
  }
  if (!it->get<bool>()) {
    s.proposal.reset();
    Json j;
    j["session_id"] = s.id;
    j["accepted"] = false;
    j["pending"] = PendingJson(s.pending, s.image.width(), s.image.height());
    return Reply(j);
  }
  if (s.image.empty()) {
    return Error(409, "no-active-scene", "session has no scene or image");
  }
  if (std::optional<HttpResponse> e = CheckBox(s.proposal->box)) return *e;
  s.pending =
      PendingInstruction{s.proposal->box, s.proposal->text, "point-to-box"};
  s.proposal.reset();
  Json j = GroundPreview(s);
  Json out;
  out["session_id"] = s.id;
  out["accepted"] = true;
  for (auto& [k, v] : j.items()) {
    if (k != "session_id") out[k] = v;
  }
  return Reply(out);
}

HttpResponse HandleTrial(Session& s, const Json& body,
                         const ServiceConfig& config) {
  std::string err;
  std::optional<std::string> policy_name = OptString(body, "policy", &err);
  if (!err.empty()) return BadRequest(err);
  if (!policy_name) return BadRequest("missing 'policy' (text|grounded)");
  std::optional<PolicyKind> policy = ParsePolicyKind(*policy_name);
  if (!policy) {
    return BadRequest(
        absl::StrCat("unknown policy '", *policy_name, "' (text|grounded)"));
  }
  std::optional<std::string> text = OptString(body, "instruction_text", &err);
  if (!err.empty()) return BadRequest(err);
  if (!s.scene) {
    return Error(409, "no-active-scene", "trials need a simulated scene");
  }

  TrialInput input;
  input.policy = *policy;
  if (*policy == PolicyKind::kText) {
    if (!text || text->empty()) {
      return Error(400, "missing-instruction",
                   "text policy requires 'instruction_text'");
    }
    input.text = *text;
  } else {
    if (!s.pending) {
      return Error(409, "no-pending-grounding",
                   "grounded policy requires a pending grounded instruction");
    }
    input.grounded_image = MakeGroundedImage(*s.scene, s.pending->box);
    input.text = s.pending->text;
  }
  const uint64_t seed =
      DeriveSeed(s.seed, "trial", static_cast<uint64_t>(s.trials_run));
  absl::StatusOr<TrialResult> result =
      RunTrial(*s.scene, input, config.protocol, seed);
  if (!result.ok()) {
    if (*policy == PolicyKind::kText) {
      return Error(400, "unparseable-text", result.status().message());
    }
    return Error(500, "internal", result.status().message());
  }

  Json entry;
  entry["trial_index"] = s.trials_run;
  entry["seed"] = seed;
  entry["policy"] = std::string(PolicyKindName(*policy));
  entry["scene_seed"] = s.scene->seed;
  entry["family"] = std::string(SimFamilyName(s.scene->family));
  entry["instruction_text"] = input.text;
  if (*policy == PolicyKind::kGrounded) {
    entry["box"] = BoxJson(s.pending->box);
    entry["box_source"] = s.pending->source;
  } else {
    entry["box"] = nullptr;
    entry["box_source"] = nullptr;
  }
  entry["result"] = Json::parse(TrialResultToJson(*result));
  ++s.trials_run;
  s.history.push_back(entry);

  Json j;
  j["session_id"] = s.id;
  for (auto& [k, v] : entry.items()) j[k] = v;
  return Reply(j);
}

Json SessionJson(const Session& s) {
  Json j;
  j["session_id"] = s.id;
  j["seed"] = s.seed;
  if (s.scene) {
    j["scene"] = {{"family", std::string(SimFamilyName(s.scene->family))},
                  {"seed", s.scene->seed}};
  } else {
    j["scene"] = nullptr;
  }
  if (s.image.empty()) {
    j["image"] = nullptr;
  } else {
    j["image"] = {{"source", s.image_source},
                  {"width", s.image.width()},
                  {"height", s.image.height()}};
  }
  j["pending"] = PendingJson(s.pending, s.image.width(), s.image.height());
  j["proposal"] = ProposalJson(s.proposal);
  j["history"] = s.history;
  return j;
}

HttpResponse HandleAnnotate(const Json& body, const ServiceConfig& config) {
  std::string err;
  std::optional<std::string> path = OptString(body, "episode_path", &err);
  if (!err.empty()) return BadRequest(err);
  if (!path || path->empty()) return BadRequest("missing 'episode_path'");
  AnnotateOptions options;
  options.frames = config.frames;
  std::optional<int64_t> frames = OptInt(body, "frames", &err);
  if (!err.empty()) return BadRequest(err);
  if (frames) {
    if (*frames < 2 || *frames > 1000) {
      return BadRequest("'frames' must be in [2, 1000]");
    }
    options.frames = static_cast<int>(*frames);
  }
  std::optional<int64_t> segment = OptInt(body, "segment_id", &err);
  if (!err.empty()) return BadRequest(err);
  if (segment) options.segment_id = static_cast<int>(*segment);
  if (!config.client) {
    return Error(503, "model-not-configured", "no model client configured");
  }

  std::filesystem::path dir(*path);
  if (dir.is_relative() && !config.episodes_root.empty()) {
    dir = config.episodes_root / dir;
  }
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    return Error(404, "episode-not-found",
                 absl::StrCat("no episode directory at '", *path, "'"));
  }
  absl::StatusOr<Episode> episode = ScanEpisode(dir);
  if (!episode.ok()) return BadRequest(episode.status().message());
  absl::StatusOr<GroundedLabel> label =
      AnnotateEpisode(*episode, *config.client, options);
  if (!label.ok()) return ModelError(label.status());
  return Reply(Json::parse(LabelToJson(*label)));
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {}
Service::~Service() = default;

std::shared_ptr<Session> Service::FindSession(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

HttpResponse Service::Handle(std::string_view method, std::string_view path,
                             std::string_view body) {
  const Match m = MatchRoute(path);
  if (m.route == Route::kNone) {
    return Error(404, "not-found", absl::StrCat("no route for ", std::string(path)));
  }
  if (method != std::string_view(m.method)) {
    return Error(405, "method-not-allowed",
                 absl::StrCat(std::string(path), " accepts ", m.method));
  }

  if (m.route == Route::kHealth) {
    Json j;
    j["status"] = config_.credential_configured ? "ok" : "mock-only";
    j["version"] = std::string(kGroundkitVersion);
    j["api_version"] = std::string(kApiVersion);
    j["model_client"] =
        config_.client ? Json(config_.client->Describe()) : Json(nullptr);
    return Reply(j);
  }

  std::shared_ptr<Session> session;
  if (!m.session_id.empty()) {
    session = FindSession(m.session_id);
    if (!session) {
      return Error(404, "session-not-found",
                   absl::StrCat("unknown session '", m.session_id, "'"));
    }
  }
  if (m.route == Route::kSession) {
    std::lock_guard<std::mutex> lock(session->mu);
    return Reply(SessionJson(*session));
  }

  std::optional<Json> json = ParseBody(body);
  if (!json) return BadRequest("body must be a JSON object");

  switch (m.route) {
    case Route::kSessions: {
      std::string err;
      std::optional<uint64_t> seed = OptSeed(*json, "seed", &err);
      if (!err.empty()) return BadRequest(err);
      auto s = std::make_shared<Session>();
      {
        std::lock_guard<std::mutex> lock(mu_);
        const int n = next_session_++;
        s->id = absl::StrCat("s", n);
        s->seed = seed ? *seed
                       : DeriveSeed(config_.base_seed, "session",
                                    static_cast<uint64_t>(n));
        sessions_[s->id] = s;
      }
      return Reply(SessionJson(*s), 201);
    }
    case Route::kAnnotate:
      return HandleAnnotate(*json, config_);
    default:
      break;
  }

  std::lock_guard<std::mutex> lock(session->mu);
  switch (m.route) {
    case Route::kScene:
      return HandleScene(*session, *json);
    case Route::kImage:
      return HandleImage(*session, *json);
    case Route::kGround:
      return HandleGround(*session, *json);
    case Route::kPointToBox:
      return HandlePointToBox(*session, *json, config_);
    case Route::kConfirm:
      return HandleConfirm(*session, *json);
    case Route::kTrial:
      return HandleTrial(*session, *json, config_);
    default:
      return Error(500, "internal", "unhandled route");
  }
}

}  // namespace groundkit
