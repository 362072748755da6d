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

#include <string>
#include <thread>
#include <vector>

#include "absl/strings/escaping.h"
#include "absl/strings/str_cat.h"
#include "gmock/gmock.h"
#include "groundkit/annotate/annotate.h"
#include "groundkit/annotate/record.h"
#include "groundkit/core/image_io.h"
#include "groundkit/core/random.h"
#include "groundkit/render/render.h"
#include "groundkit/sim/scene.h"
#include "groundkit/sim/trial.h"
#include "gtest/gtest.h"
#include "http_golden.h"
#include "httplib.h"
#include "json.hpp"
#include "test_util.h"

namespace groundkit {
namespace {

using Json = nlohmann::ordered_json;
using ::testing::HasSubstr;

struct Reply {
  int status = 0;
  Json body;
};

Reply Call(Service& service, std::string_view method, std::string_view path,
           const Json& body = nullptr) {
  HttpResponse r =
      service.Handle(method, path, body.is_null() ? "" : body.dump());
  return {r.status, Json::parse(r.body)};
}

Json Box(double x0, double y0, double x1, double y1) {
  return {{"x_min", x0}, {"y_min", y0}, {"x_max", x1}, {"y_max", y1}};
}

ImageBuffer DecodeB64(const Json& field) {
  std::string bytes;
  EXPECT_TRUE(absl::Base64Unescape(field.get<std::string>(), &bytes));
  absl::StatusOr<ImageBuffer> img = DecodeImage(bytes);
  EXPECT_TRUE(img.ok()) << img.status();
  return img.ok() ? *img : ImageBuffer();
}

std::string PickExample() {
  return testing::ReadTestdata("responses/pick_example.plain.txt");
}

ServiceConfig MockConfig(std::string response = "[]") {
  ServiceConfig config;
  config.client = ReplayClient::Constant(std::move(response));
  return config;
}

// Creates session s1 (seed 7) with the clutter seed-1 scene.
void SetUpClutter(Service& service) {
  ASSERT_EQ(Call(service, "POST", "/v1/sessions", {{"seed", 7}}).status, 201);
  ASSERT_EQ(Call(service, "POST", "/v1/sessions/s1/scene",
                 {{"family", "clutter"}, {"seed", 1}})
                .status,
            200);
}

class FailingClient : public ModelClient {
 public:
  absl::StatusOr<std::string> Request(const std::vector<ImageBuffer>&,
                                      const std::string&) override {
    return absl::UnavailableError("upstream returned 503");
  }
  std::string Describe() const override { return "failing"; }
};

TEST(ServiceGoldenTest, SessionFlowMatchesGolden) {
  testing::TempDir dir;
  testing::WriteGoldenEpisodes(dir.path());
  absl::StatusOr<ServiceConfig> config =
      testing::GoldenServiceConfig(dir.path());
  ASSERT_TRUE(config.ok()) << config.status();
  Service service(*config);
  absl::StatusOr<std::string> transcript =
      testing::RunGoldenFlow(service, "session_flow");
  ASSERT_TRUE(transcript.ok()) << transcript.status();
  EXPECT_TRUE(testing::CheckGolden("session_flow", *transcript).ok());
}

TEST(ServiceGoldenTest, FreshServicesReplayIdentically) {
  testing::TempDir dir;
  testing::WriteGoldenEpisodes(dir.path());
  std::vector<std::string> runs;
  for (int i = 0; i < 2; ++i) {
    Service service(*testing::GoldenServiceConfig(dir.path()));
    absl::StatusOr<std::string> t =
        testing::RunGoldenFlow(service, "session_flow");
    ASSERT_TRUE(t.ok()) << t.status();
    runs.push_back(*t);
  }
  EXPECT_EQ(runs[0], runs[1]);
}

TEST(ServiceTest, HealthReportsMockOnlyWithoutCredential) {
  Service service(MockConfig());
  Reply r = Call(service, "GET", "/v1/health");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["status"], "mock-only");
  EXPECT_EQ(r.body["api_version"], "v1");
  EXPECT_EQ(r.body["model_client"], "replay:constant");

  ServiceConfig with_key = MockConfig();
  with_key.credential_configured = true;
  Service live(with_key);
  EXPECT_EQ(Call(live, "GET", "/health").body["status"], "ok");

  Service bare{ServiceConfig{}};
  EXPECT_TRUE(Call(bare, "GET", "/v1/health").body["model_client"].is_null());
}

TEST(ServiceTest, RoutingErrors) {
  Service service(MockConfig());
  Reply r = Call(service, "GET", "/v1/nope");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(r.body["error"]["code"], "not-found");
  r = Call(service, "GET", "/v1/sessions");
  EXPECT_EQ(r.status, 405);
  EXPECT_EQ(r.body["error"]["code"], "method-not-allowed");
  HttpResponse raw = service.Handle("POST", "/v1/sessions", "{not json");
  EXPECT_EQ(raw.status, 400);
  EXPECT_THAT(raw.body, HasSubstr("invalid-request"));
  r = Call(service, "POST", "/v1/sessions", {{"seed", -1}});
  EXPECT_EQ(r.status, 400);
}

TEST(ServiceTest, UnknownSessionIs404) {
  Service service(MockConfig());
  for (const char* path :
       {"/v1/sessions/s1", "/v1/sessions/zz/scene", "/v1/sessions/zz/trial"}) {
    Reply r = Call(service, path == std::string("/v1/sessions/s1") ? "GET"
                                                                    : "POST",
                   path, Json::object());
    EXPECT_EQ(r.status, 404) << path;
    EXPECT_EQ(r.body["error"]["code"], "session-not-found");
    EXPECT_TRUE(r.body["error"].contains("detail"));
  }
}

TEST(ServiceTest, SessionIdsAreSequential) {
  Service service(MockConfig());
  EXPECT_EQ(Call(service, "POST", "/v1/sessions").body["session_id"], "s1");
  EXPECT_EQ(Call(service, "POST", "/v1/sessions").body["session_id"], "s2");
  // Unseeded sessions get distinct derived seeds.
  EXPECT_NE(Call(service, "GET", "/v1/sessions/s1").body["seed"],
            Call(service, "GET", "/v1/sessions/s2").body["seed"]);
}

TEST(ServiceTest, SceneMatchesGenScene) {
  Service service(MockConfig());
  Call(service, "POST", "/v1/sessions");
  Reply r = Call(service, "POST", "/v1/sessions/s1/scene",
                 {{"family", "clutter"}, {"seed", 1}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  absl::StatusOr<Scene> scene = GenScene(SimFamily::kClutter, SceneParams{}, 1);
  ASSERT_TRUE(scene.ok());
  EXPECT_EQ(r.body["scene"], Json::parse(SceneToJson(*scene)));
  EXPECT_EQ(r.body["scene"]["objects"].size(), 6u);
  EXPECT_EQ(DecodeB64(r.body["image_png_base64"]), RenderOverhead(*scene));
  EXPECT_EQ(r.body["width"], 600);
  EXPECT_EQ(r.body["height"], 400);
}

TEST(ServiceTest, SceneValidation) {
  Service service(MockConfig());
  Call(service, "POST", "/v1/sessions");
  Reply r = Call(service, "POST", "/v1/sessions/s1/scene",
                 {{"family", "teleport"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"]["code"], "invalid-family");
  r = Call(service, "POST", "/v1/sessions/s1/scene", Json::object());
  EXPECT_EQ(r.body["error"]["code"], "invalid-family");
  r = Call(service, "POST", "/v1/sessions/s1/scene",
           {{"family", "clutter"}, {"params", {{"num_objects", 0}}}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"]["code"], "invalid-request");
  r = Call(service, "POST", "/v1/sessions/s1/scene",
           {{"family", "clutter"}, {"params", {{"num_objects", 200}}}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"]["code"], "infeasible-scene");
}

TEST(ServiceTest, GroundPreviewCarriesExactlyTheSubmittedBox) {
  Service service(MockConfig());
  SetUpClutter(service);
  const NormBox box{0.25, 0.3, 0.5, 0.7};
  Reply r = Call(service, "POST", "/v1/sessions/s1/ground",
                 {{"box", Box(0.25, 0.3, 0.5, 0.7)}, {"text", "pick up"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  const ImageBuffer preview = DecodeB64(r.body["preview_png_base64"]);
  const ImageBuffer base =
      RenderOverhead(*GenScene(SimFamily::kClutter, SceneParams{}, 1));
  const OverlayStyle style = DefaultOverlayStyle(base.width(), base.height());
  EXPECT_EQ(preview, RenderOverlay(base, box, style));
  absl::StatusOr<PixelBox> detected = DetectOverlay(preview, style);
  ASSERT_TRUE(detected.ok());
  EXPECT_EQ(*detected, NormToPixel(box, base.width(), base.height()));
  EXPECT_EQ(r.body["detected_pixel_box"], r.body["pending"]["pixel_box"]);
  EXPECT_EQ(r.body["pending"]["source"], "ground");
}

TEST(ServiceTest, BoxErrors) {
  Service service(MockConfig());
  SetUpClutter(service);
  Reply r = Call(service, "POST", "/v1/sessions/s1/ground",
                 {{"box", Box(0.6, 0.1, 0.4, 0.2)}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"]["code"], "box-ordering");
  r = Call(service, "POST", "/v1/sessions/s1/ground",
           {{"box", Box(0.1, 0.1, 1.4, 0.2)}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"]["code"], "invalid-box");
  r = Call(service, "POST", "/v1/sessions/s1/ground",
           {{"box", Box(-0.1, 0.1, 0.4, 0.2)}});
  EXPECT_EQ(r.body["error"]["code"], "invalid-box");
  r = Call(service, "POST", "/v1/sessions/s1/ground", {{"box", "wide"}});
  EXPECT_EQ(r.status, 400);
  // Nothing became pending.
  EXPECT_TRUE(Call(service, "GET", "/v1/sessions/s1").body["pending"].is_null());
}

TEST(ServiceTest, SecondGroundReplacesPending) {
  Service service(MockConfig());
  SetUpClutter(service);
  Call(service, "POST", "/v1/sessions/s1/ground",
       {{"box", Box(0.1, 0.1, 0.2, 0.2)}, {"text", "a"}});
  Call(service, "POST", "/v1/sessions/s1/ground",
       {{"box", Box(0.3, 0.3, 0.4, 0.4)}, {"text", "b"}});
  Json pending = Call(service, "GET", "/v1/sessions/s1").body["pending"];
  EXPECT_EQ(pending["text"], "b");
  EXPECT_EQ(pending["box"], Box(0.3, 0.3, 0.4, 0.4));
}

TEST(ServiceTest, GroundedTrialRequiresPendingBox) {
  Service service(MockConfig());
  SetUpClutter(service);
  Reply r = Call(service, "POST", "/v1/sessions/s1/trial",
                 {{"policy", "grounded"}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body["error"]["code"], "no-pending-grounding");
}

TEST(ServiceTest, TrialNeedsScene) {
  Service service(MockConfig());
  Call(service, "POST", "/v1/sessions");
  Reply r = Call(service, "POST", "/v1/sessions/s1/trial",
                 {{"policy", "text"}, {"instruction_text", "Pick the bottle."}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body["error"]["code"], "no-active-scene");
}

TEST(ServiceTest, TextTrialErrors) {
  Service service(MockConfig());
  SetUpClutter(service);
  Reply r = Call(service, "POST", "/v1/sessions/s1/trial", {{"policy", "text"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"]["code"], "missing-instruction");
  r = Call(service, "POST", "/v1/sessions/s1/trial",
           {{"policy", "text"}, {"instruction_text", "hello there"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"]["code"], "unparseable-text");
  r = Call(service, "POST", "/v1/sessions/s1/trial", {{"policy", "psychic"}});
  EXPECT_EQ(r.body["error"]["code"], "invalid-request");
  // Failed requests do not consume trial seeds.
  r = Call(service, "POST", "/v1/sessions/s1/trial",
           {{"policy", "text"}, {"instruction_text", "Pick the bottle."}});
  EXPECT_EQ(r.body["trial_index"], 0);
}

TEST(ServiceTest, GroundedTrialEqualsDirectSimulation) {
  Service service(MockConfig());
  SetUpClutter(service);
  absl::StatusOr<Scene> scene = GenScene(SimFamily::kClutter, SceneParams{}, 1);
  ASSERT_TRUE(scene.ok());
  absl::StatusOr<NormBox> truth = GroundTruthBox(*scene);
  ASSERT_TRUE(truth.ok());
  Call(service, "POST", "/v1/sessions/s1/ground",
       {{"box", Box(truth->x_min, truth->y_min, truth->x_max, truth->y_max)}});
  Reply r = Call(service, "POST", "/v1/sessions/s1/trial",
                 {{"policy", "grounded"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["result"]["success"], true);
  EXPECT_EQ(r.body["result"]["attempts"], 1);

  TrialInput input;
  input.policy = PolicyKind::kGrounded;
  input.grounded_image = MakeGroundedImage(*scene, *truth);
  const uint64_t seed = DeriveSeed(7, "trial", 0);
  EXPECT_EQ(r.body["seed"], seed);
  absl::StatusOr<TrialResult> direct =
      RunTrial(*scene, input, TrialProtocol{}, seed);
  ASSERT_TRUE(direct.ok());
  EXPECT_EQ(r.body["result"], Json::parse(TrialResultToJson(*direct)));
}

TEST(ServiceTest, TextTrialsReproduciblePerSessionSeed) {
  auto run = [](uint64_t seed) {
    Service service(MockConfig());
    Call(service, "POST", "/v1/sessions", {{"seed", seed}});
    Call(service, "POST", "/v1/sessions/s1/scene",
         {{"family", "clutter"}, {"seed", 1}});
    Json results = Json::array();
    for (int i = 0; i < 12; ++i) {
      results.push_back(Call(service, "POST", "/v1/sessions/s1/trial",
                             {{"policy", "text"},
                              {"instruction_text", "Pick the bottle."}})
                            .body["result"]);
    }
    return results;
  };
  EXPECT_EQ(run(7), run(7));
  EXPECT_NE(run(7), run(8));
}

TEST(ServiceTest, ReplacingSceneKeepsHistoryAndClearsPending) {
  Service service(MockConfig());
  SetUpClutter(service);
  Call(service, "POST", "/v1/sessions/s1/ground",
       {{"box", Box(0.1, 0.1, 0.3, 0.3)}});
  Call(service, "POST", "/v1/sessions/s1/trial", {{"policy", "grounded"}});
  Reply r = Call(service, "POST", "/v1/sessions/s1/scene",
                 {{"family", "egg-place"}, {"seed", 4}});
  ASSERT_EQ(r.status, 200);
  Json s = Call(service, "GET", "/v1/sessions/s1").body;
  EXPECT_EQ(s["history"].size(), 1u);
  EXPECT_EQ(s["history"][0]["family"], "clutter");
  EXPECT_EQ(s["scene"]["family"], "egg-place");
  EXPECT_TRUE(s["pending"].is_null());
  EXPECT_EQ(Call(service, "POST", "/v1/sessions/s1/trial",
                 {{"policy", "grounded"}})
                .status,
            409);
}

TEST(ServiceTest, UploadedImageCanBeGroundedButNotTrialed) {
  Service service(MockConfig());
  Call(service, "POST", "/v1/sessions");
  ImageBuffer img = testing::PatternImage("upload", 0, 40, 30);
  img.Set(3, 3, kMarkerColor);
  Reply r = Call(service, "POST", "/v1/sessions/s1/image",
                 {{"image_png_base64", absl::Base64Escape(EncodePng(img))}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["width"], 40);
  EXPECT_GE(r.body["marker_pixels_adjusted"].get<int>(), 1);
  r = Call(service, "POST", "/v1/sessions/s1/ground",
           {{"box", Box(0.25, 0.2, 0.75, 0.8)}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["detected_pixel_box"], r.body["pending"]["pixel_box"]);
  r = Call(service, "POST", "/v1/sessions/s1/trial", {{"policy", "grounded"}});
  EXPECT_EQ(r.body["error"]["code"], "no-active-scene");
  r = Call(service, "POST", "/v1/sessions/s1/image",
           {{"image_png_base64", "!!!"}});
  EXPECT_EQ(r.status, 400);
}

TEST(ServiceTest, PointToBoxProposesAndConfirmFeedsTrial) {
  absl::StatusOr<Scene> scene = GenScene(SimFamily::kClutter, SceneParams{}, 1);
  ASSERT_TRUE(scene.ok());
  absl::StatusOr<ThousandBox> t = NormToThousand(*GroundTruthBox(*scene));
  ASSERT_TRUE(t.ok());
  const std::string tape =
      absl::StrCat("[{\"box_2d\": [", t->y_min, ", ", t->x_min, ", ", t->y_max,
                   ", ", t->x_max, "], \"label\": \"green bottle\"}]");
  Service service(MockConfig(tape));
  SetUpClutter(service);

  Reply r = Call(service, "POST", "/v1/sessions/s1/point-to-box/confirm",
                 {{"accept", true}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body["error"]["code"], "no-pending-proposal");

  r = Call(service, "POST", "/v1/sessions/s1/point-to-box",
           {{"text", "the bottle under the finger"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["proposal"]["label"], "green bottle");
  EXPECT_EQ(r.body["raw_response"], tape);
  const NormBox proposed = *ThousandToNorm(*t);
  EXPECT_EQ(r.body["proposal"]["box"],
            Box(proposed.x_min, proposed.y_min, proposed.x_max,
                proposed.y_max));
  // Proposals are not pending until confirmed.
  EXPECT_EQ(Call(service, "POST", "/v1/sessions/s1/trial",
                 {{"policy", "grounded"}})
                .status,
            409);

  r = Call(service, "POST", "/v1/sessions/s1/point-to-box/confirm",
           {{"accept", true}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["accepted"], true);
  EXPECT_EQ(r.body["pending"]["source"], "point-to-box");

  r = Call(service, "POST", "/v1/sessions/s1/trial", {{"policy", "grounded"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["box"], Box(proposed.x_min, proposed.y_min, proposed.x_max,
                               proposed.y_max));
  EXPECT_EQ(r.body["box_source"], "point-to-box");
  EXPECT_EQ(r.body["result"]["success"], true);
  EXPECT_EQ(r.body["result"]["chosen"]["object_id"], scene->target_id);
}

TEST(ServiceTest, ConfirmRejectDropsProposal) {
  Service service(MockConfig(
      "[{\"box_2d\": [100, 100, 300, 300], \"label\": \"thing\"}]"));
  SetUpClutter(service);
  Call(service, "POST", "/v1/sessions/s1/point-to-box", {{"text", "that"}});
  Reply r = Call(service, "POST", "/v1/sessions/s1/point-to-box/confirm",
                 {{"accept", false}});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["accepted"], false);
  EXPECT_TRUE(r.body["pending"].is_null());
  EXPECT_EQ(Call(service, "POST", "/v1/sessions/s1/point-to-box/confirm",
                 {{"accept", true}})
                .status,
            409);
}

TEST(ServiceTest, PointToBoxErrorTable) {
  {
    Service service(MockConfig("[]"));
    SetUpClutter(service);
    Reply r = Call(service, "POST", "/v1/sessions/s1/point-to-box",
                   {{"text", "that"}});
    EXPECT_EQ(r.status, 422);
    EXPECT_EQ(r.body["error"]["code"], "no-region");
    EXPECT_EQ(r.body["error"]["detail"]["raw_response"], "[]");
  }
  {
    Service service(MockConfig("I cannot see a hand."));
    SetUpClutter(service);
    Reply r = Call(service, "POST", "/v1/sessions/s1/point-to-box",
                   {{"text", "that"}});
    EXPECT_EQ(r.status, 422);
    EXPECT_EQ(r.body["error"]["code"], "parse-failure");
    EXPECT_EQ(r.body["error"]["detail"]["raw_response"],
              "I cannot see a hand.");
  }
  {
    ServiceConfig config;
    config.client = std::make_shared<FailingClient>();
    Service service(config);
    SetUpClutter(service);
    Reply r = Call(service, "POST", "/v1/sessions/s1/point-to-box",
                   {{"text", "that"}});
    EXPECT_EQ(r.status, 502);
    EXPECT_EQ(r.body["error"]["code"], "model-failure");
    EXPECT_THAT(r.body["error"]["message"].get<std::string>(),
                HasSubstr("upstream returned 503"));
  }
  {
    Service service{ServiceConfig{}};
    SetUpClutter(service);
    Reply r = Call(service, "POST", "/v1/sessions/s1/point-to-box",
                   {{"text", "that"}});
    EXPECT_EQ(r.status, 503);
    EXPECT_EQ(r.body["error"]["code"], "model-not-configured");
  }
  {
    Service service(MockConfig("[]"));
    Call(service, "POST", "/v1/sessions");
    Reply r = Call(service, "POST", "/v1/sessions/s1/point-to-box",
                   {{"text", "that"}});
    EXPECT_EQ(r.status, 409);
    r = Call(service, "POST", "/v1/sessions/s1/point-to-box", Json::object());
    EXPECT_EQ(r.body["error"]["code"], "missing-instruction");
  }
}

TEST(ServiceTest, AnnotateReturnsExampleLabel) {
  testing::TempDir dir;
  testing::WriteEpisodeFixture(dir.path(), "ep1", "pick up the red object",
                               40);
  ServiceConfig config = MockConfig(PickExample());
  config.episodes_root = dir.path();
  Service service(config);
  Reply r = Call(service, "POST", "/v1/annotate", {{"episode_path", "ep1"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["box"], Json::parse("[0.411, 0.618, 0.457, 0.732]"));
  EXPECT_EQ(r.body["label"], "red object");
  EXPECT_EQ(r.body["episode_id"], "ep1");
  // Absolute paths bypass the root.
  r = Call(service, "POST", "/v1/annotate",
           {{"episode_path", (dir.path() / "ep1").string()}});
  EXPECT_EQ(r.status, 200);
  // Episodes are read-only to the service.
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "labels"));
}

TEST(ServiceTest, AnnotateErrors) {
  testing::TempDir dir;
  testing::WriteEpisodeFixture(dir.path(), "ep1", "pick up the red object",
                               40);
  ServiceConfig config = MockConfig("not a record");
  config.episodes_root = dir.path();
  Service service(config);
  Reply r = Call(service, "POST", "/v1/annotate", {{"episode_path", "zz"}});
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(r.body["error"]["code"], "episode-not-found");
  r = Call(service, "POST", "/v1/annotate", Json::object());
  EXPECT_EQ(r.status, 400);
  r = Call(service, "POST", "/v1/annotate", {{"episode_path", "ep1"}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"]["code"], "parse-failure");
  EXPECT_EQ(r.body["error"]["detail"]["raw_response"], "not a record");

  Service bare{ServiceConfig{}};
  EXPECT_EQ(Call(bare, "POST", "/v1/annotate", {{"episode_path", "ep1"}})
                .body["error"]["code"],
            "model-not-configured");
}

class HttpServiceTest : public ::testing::Test {
 protected:
  void Start(ServiceConfig config) {
    service_ = std::make_unique<Service>(std::move(config));
    server_ = std::make_unique<HttpServer>(*service_);
    absl::StatusOr<int> port = server_->Bind("127.0.0.1", 0);
    ASSERT_TRUE(port.ok()) << port.status();
    port_ = *port;
    thread_ = std::thread([this] { (void)server_->Listen(); });
    server_->WaitUntilReady();
  }
  void TearDown() override {
    if (server_) server_->Stop();
    if (thread_.joinable()) thread_.join();
  }

  std::unique_ptr<Service> service_;
  std::unique_ptr<HttpServer> server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpServiceTest, ServesJsonOverHttp) {
  Start(MockConfig());
  httplib::Client client("127.0.0.1", port_);
  auto res = client.Get("/v1/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(Json::parse(res->body)["status"], "mock-only");

  res = client.Post("/v1/sessions", "{\"seed\": 3}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  res = client.Post("/v1/sessions/s2/scene", "{}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(Json::parse(res->body)["error"]["code"], "session-not-found");
}

TEST_F(HttpServiceTest, ParallelAnnotateEqualsSequential) {
  testing::TempDir dir;
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i) {
    ids.push_back(absl::StrCat("ep", i));
    testing::WriteEpisodeFixture(dir.path(), ids.back(),
                                 i % 2 ? "pick up the red object"
                                       : "pick the red block",
                                 20 + 3 * i);
  }
  ServiceConfig config = MockConfig(PickExample());
  config.episodes_root = dir.path();
  Start(config);

  std::vector<std::string> sequential;
  for (const std::string& id : ids) {
    HttpResponse r = service_->Handle(
        "POST", "/v1/annotate", Json{{"episode_path", id}}.dump());
    ASSERT_EQ(r.status, 200) << r.body;
    sequential.push_back(r.body);
  }

  std::vector<std::string> parallel(ids.size());
  std::vector<int> status(ids.size(), 0);
  std::vector<std::thread> threads;
  for (size_t i = 0; i < ids.size(); ++i) {
    threads.emplace_back([&, i] {
      httplib::Client client("127.0.0.1", port_);
      client.set_read_timeout(30, 0);
      auto res = client.Post("/v1/annotate",
                             Json{{"episode_path", ids[i]}}.dump(),
                             "application/json");
      if (res) {
        status[i] = res->status;
        parallel[i] = res->body;
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(status[i], 200) << i;
  EXPECT_EQ(parallel, sequential);
}

TEST(ServiceTest, ConcurrentSessionsAreIndependent) {
  auto script = [](Service& service, const std::string& id) {
    const std::string base = absl::StrCat("/v1/sessions/", id);
    Json out = Json::array();
    out.push_back(Call(service, "POST", base + "/scene",
                       {{"family", "clutter"}, {"seed", 5}})
                      .body["scene"]);
    for (int i = 0; i < 6; ++i) {
      out.push_back(Call(service, "POST", base + "/trial",
                         {{"policy", "text"},
                          {"instruction_text", "Pick the bottle."}})
                        .body["result"]);
    }
    return out;
  };
  Service sequential(MockConfig());
  Service concurrent(MockConfig());
  for (int i = 0; i < 4; ++i) {
    Call(sequential, "POST", "/v1/sessions", {{"seed", 100 + i}});
    Call(concurrent, "POST", "/v1/sessions", {{"seed", 100 + i}});
  }
  std::vector<Json> expected, actual(4);
  for (int i = 0; i < 4; ++i) {
    expected.push_back(script(sequential, absl::StrCat("s", i + 1)));
  }
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] {
      actual[i] = script(concurrent, absl::StrCat("s", i + 1));
    });
  }
  for (std::thread& t : threads) t.join();
  EXPECT_EQ(actual, expected);
}

}  // namespace
}  // namespace groundkit
