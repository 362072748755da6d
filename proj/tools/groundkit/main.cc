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

// groundkit: command-line front end for every module.

#include <fnmatch.h>

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "groundkit/annotate/annotate.h"
#include "groundkit/annotate/audit.h"
#include "groundkit/annotate/client.h"
#include "groundkit/augment/augment.h"
#include "groundkit/core/image_io.h"
#include "groundkit/core/status_macros.h"
#include "groundkit/core/version.h"
#include "groundkit/ingest/episode.h"
#include "groundkit/ingest/manifest.h"
#include "groundkit/mixture/mixture.h"
#include "groundkit/render/render.h"
#include "groundkit/service/service.h"
#include "groundkit/sim/eval.h"
#include "groundkit/sim/scene.h"
#include "groundkit/sim/trial.h"

namespace groundkit {
namespace {

namespace fs = std::filesystem;

std::string EnvOr(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

// "x_min,y_min,x_max,y_max" as fractions.
absl::StatusOr<NormBox> ParseBoxArg(const std::string& text) {
  std::vector<std::string> parts = absl::StrSplit(text, ',');
  if (parts.size() != 4) {
    return absl::InvalidArgumentError(
        absl::StrCat("--box wants x_min,y_min,x_max,y_max; got '", text, "'"));
  }
  double v[4];
  for (int i = 0; i < 4; ++i) {
    if (!absl::SimpleAtod(parts[i], &v[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("--box: '", parts[i], "' is not a number"));
    }
  }
  NormBox box{v[0], v[1], v[2], v[3]};
  GK_RETURN_IF_ERROR(box.Validate());
  return box;
}

// "lo:hi" fractions.
absl::StatusOr<std::pair<double, double>> ParseRange(const std::string& text) {
  std::vector<std::string> parts = absl::StrSplit(text, ':');
  std::pair<double, double> r;
  if (parts.size() != 2 || !absl::SimpleAtod(parts[0], &r.first) ||
      !absl::SimpleAtod(parts[1], &r.second)) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected lo:hi, got '", text, "'"));
  }
  return r;
}

// Replay tape, or the live client from the environment when `mock` is
// "off".
absl::StatusOr<std::shared_ptr<ModelClient>> MakeClient(const std::string& mock,
                                                        bool* live) {
  *live = false;
  if (mock != "off") {
    GK_ASSIGN_OR_RETURN(std::unique_ptr<ReplayClient> tape,
                        ReplayClient::FromFile(mock));
    return std::shared_ptr<ModelClient>(std::move(tape));
  }
  HttpClientConfig config = HttpClientConfigFromEnv();
  if (!config.configured()) {
    return absl::FailedPreconditionError(
        "--mock off needs GROUNDKIT_MODEL_ENDPOINT and GROUNDKIT_MODEL_API_KEY");
  }
  *live = true;
  return std::shared_ptr<ModelClient>(
      std::make_shared<HttpModelClient>(std::move(config)));
}

absl::StatusOr<ImageBuffer> FirstOverheadFrame(const fs::path& root,
                                               const std::string& episode_id) {
  GK_ASSIGN_OR_RETURN(Episode episode, ScanEpisode(root / episode_id));
  auto it = episode.frames.find(CameraRole::kHigh);
  if (it == episode.frames.end() || it->second.empty()) {
    return absl::NotFoundError(
        absl::StrCat("episode ", episode_id, " has no overhead frames"));
  }
  return LoadImage(it->second.front());
}

int Fail(const absl::Status& status) {
  std::cerr << "groundkit: " << status << "\n";
  return 1;
}

// ---------------------------------------------------------------- annotate

struct AnnotateArgs {
  std::string root;
  std::string glob = "*";
  int frames = kDefaultSampledFrames;
  std::string mock = "off";
  int max_in_flight = 0;  // 0: client config, else 4.
  int segment = 0;
  std::string manifest_out;
};

int RunAnnotate(const AnnotateArgs& args) {
  bool live = false;
  absl::StatusOr<std::shared_ptr<ModelClient>> client =
      MakeClient(args.mock, &live);
  if (!client.ok()) return Fail(client.status());

  std::vector<fs::path> dirs;
  std::error_code ec;
  for (const fs::directory_entry& e : fs::directory_iterator(args.root, ec)) {
    const std::string name = e.path().filename().string();
    if (e.is_directory() && name != "labels" &&
        fnmatch(args.glob.c_str(), name.c_str(), 0) == 0) {
      dirs.push_back(e.path());
    }
  }
  if (ec) return Fail(absl::NotFoundError(ec.message()));
  std::sort(dirs.begin(), dirs.end());
  std::vector<Episode> episodes;
  for (const fs::path& d : dirs) {
    absl::StatusOr<Episode> ep = ScanEpisode(d);
    if (!ep.ok()) return Fail(ep.status());
    episodes.push_back(*std::move(ep));
  }
  if (episodes.empty()) {
    return Fail(absl::NotFoundError(
        absl::StrCat("no episodes match '", args.glob, "' under ", args.root)));
  }

  AnnotateOptions options;
  options.frames = args.frames;
  options.segment_id = args.segment;
  int in_flight = args.max_in_flight;
  if (in_flight <= 0) in_flight = live ? HttpClientConfigFromEnv().max_in_flight : 4;
  std::vector<absl::StatusOr<GroundedLabel>> labels =
      AnnotateAll(episodes, **client, options, in_flight);

  DatasetManifest manifest;
  manifest.provenance.tool_version = std::string(kGroundkitVersion);
  manifest.provenance.source_roots = {args.root};
  manifest.provenance.notes["model_client"] = (*client)->Describe();
  int failures = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    const std::string& id = episodes[i].episode_id;
    if (!labels[i].ok()) {
      ++failures;
      std::cout << id << "\tFAILED\t" << labels[i].status().message() << "\n";
      continue;
    }
    if (absl::Status s = WriteLabel(args.root, *labels[i]); !s.ok()) {
      ++failures;
      std::cout << id << "\tFAILED\t" << s.message() << "\n";
      continue;
    }
    const GroundedLabel& l = *labels[i];
    std::cout << id << "\tok\t" << l.box << "\t" << l.label << "\n";
    Sample sample;
    sample.episode_id = id;
    sample.modality = SampleModality::kVisual;
    sample.instruction = episodes[i].task_text;
    sample.grounding = Grounding{l.box, GroundingFormat::kBoxOverlay, l.label};
    manifest.records.push_back(std::move(sample));
  }
  if (!args.manifest_out.empty()) {
    if (absl::Status s = WriteManifest(manifest, args.manifest_out); !s.ok()) {
      return Fail(s);
    }
  }
  std::cout << absl::StrFormat("%d labeled, %d failed\n",
                               static_cast<int>(labels.size()) - failures,
                               failures);
  return failures == 0 ? 0 : 1;
}

// ------------------------------------------------------------------- audit

struct AuditArgs {
  std::string manifest;
  int n = kDefaultAuditSize;
  uint64_t seed = 0;
  std::string out;
  std::string root;
  std::string score;
};

int RunAudit(const AuditArgs& args) {
  if (!args.score.empty()) {
    absl::StatusOr<std::string> text = ReadFileBytes(args.score);
    if (!text.ok()) return Fail(text.status());
    absl::StatusOr<AuditBatch> batch = AuditBatchFromJson(*text);
    if (!batch.ok()) return Fail(batch.status());
    std::cout << "accuracy " << FormatAuditAccuracy(*batch) << "\n";
    return 0;
  }
  if (args.manifest.empty()) {
    return Fail(absl::InvalidArgumentError("--manifest or --score required"));
  }
  absl::StatusOr<DatasetManifest> manifest = ReadManifest(args.manifest);
  if (!manifest.ok()) return Fail(manifest.status());
  absl::StatusOr<AuditBatch> batch =
      DrawAuditBatch(*manifest, args.n, args.seed);
  if (!batch.ok()) return Fail(batch.status());
  const std::string json = AuditBatchToJson(*batch);
  if (args.out.empty()) {
    std::cout << json;
    return 0;
  }
  std::error_code ec;
  fs::create_directories(args.out, ec);
  if (absl::Status s = WriteFileBytes(fs::path(args.out) / "audit.json", json);
      !s.ok()) {
    return Fail(s);
  }
  if (!args.root.empty()) {
    for (size_t i = 0; i < batch->items.size(); ++i) {
      const AuditItem& item = batch->items[i];
      absl::StatusOr<ImageBuffer> frame =
          FirstOverheadFrame(args.root, item.episode_id);
      if (!frame.ok()) return Fail(frame.status());
      ReserveMarkerColor(*frame);
      const ImageBuffer review = RenderOverlay(
          *frame, item.box, DefaultOverlayStyle(frame->width(), frame->height()));
      const fs::path png = fs::path(args.out) /
                           absl::StrFormat("%03d_%s.png", i, item.episode_id);
      if (absl::Status s = SavePng(review, png); !s.ok()) return Fail(s);
    }
  }
  std::cout << "wrote " << batch->items.size() << " items to " << args.out
            << "; set each verdict, then run: groundkit audit --score "
            << (fs::path(args.out) / "audit.json").string() << "\n";
  return 0;
}

// ------------------------------------------------------------------ render

struct RenderArgs {
  std::string format = "overlay";
  std::string image;
  std::string box;
  std::string out;
  std::string text = "pick up";
};

int RunRender(const RenderArgs& args) {
  std::optional<GroundingFormat> format = ParseGroundingFormat(args.format);
  if (!format) {
    return Fail(absl::InvalidArgumentError(
        absl::StrCat("unknown --format '", args.format, "'")));
  }
  absl::StatusOr<NormBox> box = ParseBoxArg(args.box);
  if (!box.ok()) return Fail(box.status());
  absl::StatusOr<ImageBuffer> image = LoadImage(args.image);
  if (!image.ok()) return Fail(image.status());
  ReserveMarkerColor(*image);
  const GroundedInstruction gi = MakeGroundedInstruction(
      *image, *box, args.text, *format,
      DefaultOverlayStyle(image->width(), image->height()));
  if (*format == GroundingFormat::kBoxText) {
    std::cout << gi.text << "\n";
    if (!args.out.empty()) {
      if (absl::Status s = WriteFileBytes(args.out, gi.text + "\n"); !s.ok()) {
        return Fail(s);
      }
    }
    return 0;
  }
  if (absl::Status s = SavePng(gi.grounded_image, args.out); !s.ok()) {
    return Fail(s);
  }
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

// ----------------------------------------------------------------- augment

struct AugmentArgs {
  std::string manifest;
  std::string out;
  std::string root;
  uint64_t seed = 0;
  double max_shift = 0.1;
  std::string cutmix = "0.1:0.5";
  std::string patch_pool;
  double apply_prob = 0.0;
  int copies = 1;
  int threads = 1;
  std::string fill = "black";
};

int RunAugment(const AugmentArgs& args) {
  absl::StatusOr<DatasetManifest> manifest = ReadManifest(args.manifest);
  if (!manifest.ok()) return Fail(manifest.status());
  TranslateParams translate;
  translate.max_shift_frac_x = args.max_shift;
  translate.max_shift_frac_y = args.max_shift;
  if (args.fill == "edge") {
    translate.fill = FillMode::kEdgeReplicate;
  } else if (args.fill != "black") {
    return Fail(absl::InvalidArgumentError("--fill is black or edge"));
  }
  CutMixParams cutmix;
  cutmix.apply_prob = args.apply_prob;
  absl::StatusOr<std::pair<double, double>> range = ParseRange(args.cutmix);
  if (!range.ok()) return Fail(range.status());
  cutmix.area_frac_lo = range->first;
  cutmix.area_frac_hi = range->second;
  if (!args.patch_pool.empty()) {
    absl::StatusOr<std::vector<ImageBuffer>> pool =
        LoadPatchPool(args.patch_pool);
    if (!pool.ok()) return Fail(pool.status());
    cutmix.patch_pool = *std::move(pool);
  }
  if (absl::Status s = translate.Validate(); !s.ok()) return Fail(s);
  if (absl::Status s = cutmix.Validate(); !s.ok()) return Fail(s);

  std::vector<AugmentJob> jobs;
  std::vector<const Sample*> sources;
  for (const Sample& sample : manifest->records) {
    if (!sample.grounding) continue;
    absl::StatusOr<ImageBuffer> frame =
        FirstOverheadFrame(args.root, sample.episode_id);
    if (!frame.ok()) return Fail(frame.status());
    ReserveMarkerColor(*frame);
    const GroundedInstruction gi = MakeGroundedInstruction(
        *frame, sample.grounding->box, sample.instruction,
        sample.grounding->format,
        DefaultOverlayStyle(frame->width(), frame->height()));
    for (int c = 0; c < args.copies; ++c) {
      jobs.push_back({sample.episode_id, static_cast<uint64_t>(c), gi});
      sources.push_back(&sample);
    }
  }
  std::vector<absl::StatusOr<AugmentResult>> results =
      AugmentBatch(jobs, translate, cutmix, args.seed, args.threads);

  std::error_code ec;
  fs::create_directories(args.out, ec);
  DatasetManifest out;
  out.provenance = manifest->provenance;
  out.provenance.tool_version = std::string(kGroundkitVersion);
  out.provenance.seed = args.seed;
  out.provenance.notes["augment"] = absl::StrFormat(
      "max_shift=%g cutmix=%s apply_prob=%g copies=%d", args.max_shift,
      args.cutmix, args.apply_prob, args.copies);
  for (size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) return Fail(results[i].status());
    const GroundedInstruction& gi = results[i]->instruction;
    const std::string name =
        absl::StrFormat("%s_%d.png", jobs[i].episode_id, jobs[i].index);
    if (absl::Status s = SavePng(gi.grounded_image, fs::path(args.out) / name);
        !s.ok()) {
      return Fail(s);
    }
    Sample sample = *sources[i];
    sample.instruction = gi.text;
    sample.grounding->box = gi.box;
    out.records.push_back(std::move(sample));
  }
  if (absl::Status s = WriteManifest(out, fs::path(args.out) / "manifest.json");
      !s.ok()) {
    return Fail(s);
  }
  std::cout << "wrote " << results.size() << " augmented samples to "
            << args.out << "\n";
  return 0;
}

// --------------------------------------------------------------------- mix

struct MixArgs {
  std::string text;
  std::string visual;
  std::string ratio = "1:1";
  uint64_t seed = 0;
  std::string out;
  bool dedup = false;
  bool oversample = false;
};

int RunMix(const MixArgs& args) {
  absl::StatusOr<MixtureSpec> spec = ParseRatio(args.ratio);
  if (!spec.ok()) return Fail(spec.status());
  spec->shuffle_seed = args.seed;
  spec->dedup = args.dedup;
  spec->oversample = args.oversample;
  absl::StatusOr<DatasetManifest> visual = ReadManifest(args.visual);
  if (!visual.ok()) return Fail(visual.status());
  DatasetManifest text;
  if (args.text.empty()) {
    text = DeriveTextManifest(*visual, {});
  } else {
    absl::StatusOr<DatasetManifest> t = ReadManifest(args.text);
    if (!t.ok()) return Fail(t.status());
    text = *std::move(t);
  }
  absl::StatusOr<DatasetManifest> mixed = BuildMixture(text, *visual, *spec);
  if (!mixed.ok()) return Fail(mixed.status());
  if (absl::Status s = WriteManifest(*mixed, args.out); !s.ok()) return Fail(s);
  std::cout << MixtureStatsToJson(ComputeMixtureStats(*mixed));
  return 0;
}

// --------------------------------------------------------------------- sim

struct SimArgs {
  std::vector<std::string> families;
  std::string policy = "both";
  int trials = 30;
  int scenes = 10;
  uint64_t seed = 0;
  std::string report;
  std::string frames_dir;
  std::string text_mode = "coarse";
  std::string target_rule = "random";
  std::string instruction;
  int threads = 1;
  int num_objects = 6;
  // Single-trial mode.
  std::optional<uint64_t> scene_seed;
  std::optional<uint64_t> trial_seed;
  std::string box;
};

int RunSingleTrial(const SimArgs& args, SimFamily family,
                   const SceneParams& params) {
  if (!args.trial_seed) {
    return Fail(absl::InvalidArgumentError(
        "single-trial mode needs --scene-seed and --trial-seed"));
  }
  absl::StatusOr<Scene> scene = GenScene(family, params, *args.scene_seed);
  if (!scene.ok()) return Fail(scene.status());
  TrialInput input;
  if (!args.box.empty()) {
    absl::StatusOr<NormBox> box = ParseBoxArg(args.box);
    if (!box.ok()) return Fail(box.status());
    input.policy = PolicyKind::kGrounded;
    input.grounded_image = MakeGroundedImage(*scene, *box);
  } else {
    input.policy = PolicyKind::kText;
    input.text = args.instruction.empty() ? scene->coarse_text : args.instruction;
  }
  absl::StatusOr<TrialResult> result =
      RunTrial(*scene, input, TrialProtocol{}, *args.trial_seed);
  if (!result.ok()) return Fail(result.status());
  std::cout << TrialResultToJson(*result) << "\n";
  return 0;
}

int RunSim(const SimArgs& args) {
  EvalConfig config;
  for (const std::string& name : args.families) {
    if (name == "all") {
      config.families = AllSimFamilies();
      continue;
    }
    std::optional<SimFamily> f = ParseSimFamily(name);
    if (!f) {
      return Fail(absl::InvalidArgumentError(
          absl::StrCat("unknown family '", name, "'")));
    }
    config.families.push_back(*f);
  }
  config.params.num_objects = args.num_objects;
  if (args.target_rule == "mure") {
    config.params.target_rule = TargetRule::kMure;
  } else if (args.target_rule != "random") {
    return Fail(absl::InvalidArgumentError("--target-rule is random or mure"));
  }
  if (args.scene_seed) {
    if (config.families.size() != 1) {
      return Fail(absl::InvalidArgumentError(
          "single-trial mode takes exactly one --family"));
    }
    return RunSingleTrial(args, config.families.front(), config.params);
  }

  if (args.policy == "text") {
    config.policies = {PolicyKind::kText};
  } else if (args.policy == "grounded") {
    config.policies = {PolicyKind::kGrounded};
  } else if (args.policy != "both") {
    return Fail(absl::InvalidArgumentError("--policy is text, grounded or both"));
  }
  if (args.text_mode == "mure") {
    config.text_mode = TextMode::kMure;
  } else if (args.text_mode != "coarse") {
    return Fail(absl::InvalidArgumentError("--text-mode is coarse or mure"));
  }
  if (!args.instruction.empty()) config.instruction = args.instruction;
  config.protocol.trials_per_scene = args.trials;
  config.scenes_per_family = args.scenes;
  config.seed = args.seed;
  config.threads = args.threads;
  if (!args.frames_dir.empty()) {
    std::error_code ec;
    fs::create_directories(args.frames_dir, ec);
    config.frames_dir = fs::path(args.frames_dir);
  }
  absl::StatusOr<EvalReport> report = RunEval(config);
  if (!report.ok()) return Fail(report.status());
  std::cout << FormatEvalTable(*report);
  if (!args.report.empty()) {
    if (absl::Status s = WriteFileBytes(args.report, EvalReportToJson(*report));
        !s.ok()) {
      return Fail(s);
    }
  }
  return 0;
}

// ------------------------------------------------------------------- serve

struct ServeArgs {
  std::string host;
  int port = 0;
  std::string mock;
  std::string episodes_root;
  uint64_t seed = 0;
  int frames = kDefaultSampledFrames;
};

HttpServer* g_server = nullptr;

void StopOnSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

int RunServe(const ServeArgs& args) {
  ServiceConfig config;
  config.base_seed = args.seed;
  config.episodes_root = args.episodes_root;
  config.frames = args.frames;
  bool live = false;
  absl::StatusOr<std::shared_ptr<ModelClient>> client =
      MakeClient(args.mock, &live);
  if (client.ok()) {
    config.client = *client;
    config.credential_configured = live;
  } else {
    // Serving without a model is allowed; model endpoints answer 503.
    std::cerr << "groundkit: no model client (" << client.status().message()
              << ")\n";
  }
  Service service(std::move(config));
  HttpServer server(service);
  absl::StatusOr<int> port = server.Bind(args.host, args.port);
  if (!port.ok()) return Fail(port.status());
  g_server = &server;
  std::signal(SIGINT, StopOnSignal);
  std::signal(SIGTERM, StopOnSignal);
  std::cout << "groundkit " << kGroundkitVersion << " serving API "
            << kApiVersion << " on http://" << args.host << ":" << *port
            << std::endl;
  absl::Status s = server.Listen();
  g_server = nullptr;
  return s.ok() ? 0 : Fail(s);
}

int Main(int argc, char** argv) {
  CLI::App app{"groundkit: visually grounded instruction toolkit"};
  app.set_version_flag("--version", std::string(kGroundkitVersion));
  app.require_subcommand(1);

  AnnotateArgs an;
  CLI::App* annotate = app.add_subcommand(
      "annotate", "Label episodes with a bounding box via a model client");
  annotate->add_option("--root", an.root, "Episode root directory")->required();
  annotate->add_option("--episodes", an.glob, "Episode id glob");
  annotate->add_option("--frames", an.frames, "Frames sampled per camera")
      ->check(CLI::Range(2, 1000));
  annotate->add_option("--mock", an.mock,
                       "Replay tape path, or 'off' for the live client");
  annotate->add_option("--max-in-flight", an.max_in_flight,
                       "Concurrent requests");
  annotate->add_option("--segment", an.segment, "Segment id for the labels");
  annotate->add_option("--manifest-out", an.manifest_out,
                       "Write a visual manifest of the new labels here");

  AuditArgs au;
  CLI::App* audit = app.add_subcommand(
      "audit", "Draw a review batch of labels, or score a reviewed batch");
  audit->add_option("--manifest", au.manifest, "Visual manifest");
  audit->add_option("--n", au.n, "Batch size")->check(CLI::NonNegativeNumber);
  audit->add_option("--seed", au.seed, "Sampling seed");
  audit->add_option("--out", au.out, "Directory for audit.json and overlays");
  audit->add_option("--root", au.root, "Episode root for review overlays");
  audit->add_option("--score", au.score, "Reviewed audit.json to score");

  RenderArgs re;
  CLI::App* render =
      app.add_subcommand("render", "Render a grounding format for one image");
  render->add_option("--format", re.format, "overlay, mask or boxtext");
  render->add_option("--image", re.image, "Input image")->required();
  render->add_option("--box", re.box, "x_min,y_min,x_max,y_max fractions")
      ->required();
  render->add_option("--out", re.out, "Output PNG (text file for boxtext)");
  render->add_option("--text", re.text, "Instruction text for boxtext");

  AugmentArgs ag;
  CLI::App* augment = app.add_subcommand(
      "augment", "Translate and CutMix the grounded samples of a manifest");
  augment->add_option("--manifest", ag.manifest, "Input manifest")->required();
  augment->add_option("--out", ag.out, "Output directory")->required();
  augment->add_option("--root", ag.root, "Episode root")->required();
  augment->add_option("--seed", ag.seed, "Base seed");
  augment->add_option("--max-shift", ag.max_shift, "Max shift fraction");
  augment->add_option("--cutmix", ag.cutmix, "Area fraction range lo:hi");
  augment->add_option("--patch-pool", ag.patch_pool, "Directory of patches");
  augment->add_option("--apply-prob", ag.apply_prob, "CutMix probability");
  augment->add_option("--copies", ag.copies, "Augmented copies per sample")
      ->check(CLI::PositiveNumber);
  augment->add_option("--threads", ag.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  augment->add_option("--fill", ag.fill, "Shift fill: black or edge");

  MixArgs mx;
  CLI::App* mix =
      app.add_subcommand("mix", "Build a ratio-balanced co-training mixture");
  mix->add_option("--text", mx.text,
                  "Text manifest (derived from --visual when omitted)");
  mix->add_option("--visual", mx.visual, "Visual manifest")->required();
  mix->add_option("--ratio", mx.ratio, "text:visual");
  mix->add_option("--seed", mx.seed, "Shuffle seed");
  mix->add_option("--out", mx.out, "Output manifest")->required();
  mix->add_flag("--dedup", mx.dedup, "Drop duplicate records first");
  mix->add_flag("--oversample", mx.oversample,
                "Repeat the smaller side instead of trimming the larger");

  SimArgs si;
  CLI::App* sim =
      app.add_subcommand("sim", "Run tabletop trials for text and grounded policies");
  sim->add_option("--family", si.families, "Scene family, repeatable, or 'all'")
      ->required();
  sim->add_option("--policy", si.policy, "text, grounded or both");
  sim->add_option("--trials", si.trials, "Trials per scene")
      ->check(CLI::PositiveNumber);
  sim->add_option("--scenes", si.scenes, "Scenes per family")
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", si.seed, "Base seed");
  sim->add_option("--report", si.report, "Write the JSON report here");
  sim->add_option("--frames-dir", si.frames_dir,
                  "Write overhead and grounded frames here");
  sim->add_option("--text-mode", si.text_mode,
                  "Text policy instruction: coarse or mure");
  sim->add_option("--target-rule", si.target_rule, "random or mure");
  sim->add_option("--instruction", si.instruction,
                  "Fixed text policy instruction");
  sim->add_option("--threads", si.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  sim->add_option("--num-objects", si.num_objects, "Objects per scene");
  sim->add_option("--scene-seed", si.scene_seed,
                  "Single trial: scene seed (prints one TrialResult)");
  sim->add_option("--trial-seed", si.trial_seed, "Single trial: policy seed");
  sim->add_option("--box", si.box,
                  "Single trial: grounded box x_min,y_min,x_max,y_max");

  ServeArgs sv;
  sv.host = EnvOr("GROUNDKIT_HOST", "127.0.0.1");
  sv.port = std::atoi(EnvOr("GROUNDKIT_PORT", "8080").c_str());
  sv.mock = EnvOr("GROUNDKIT_MOCK_TAPE", "off");
  sv.episodes_root = EnvOr("GROUNDKIT_EPISODES_ROOT", "");
  CLI::App* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--host", sv.host, "Bind address ($GROUNDKIT_HOST)");
  serve->add_option("--port", sv.port, "Port, 0 for any ($GROUNDKIT_PORT)");
  serve->add_option("--mock", sv.mock,
                    "Replay tape, or 'off' for the live client "
                    "($GROUNDKIT_MOCK_TAPE)");
  serve->add_option("--episodes-root", sv.episodes_root,
                    "Root for relative episode paths "
                    "($GROUNDKIT_EPISODES_ROOT)");
  serve->add_option("--seed", sv.seed, "Base seed for session seeds");
  serve->add_option("--frames", sv.frames, "Frames sampled per camera");

  CLI11_PARSE(app, argc, argv);

  if (*annotate) return RunAnnotate(an);
  if (*audit) return RunAudit(au);
  if (*render) return RunRender(re);
  if (*augment) return RunAugment(ag);
  if (*mix) return RunMix(mx);
  if (*sim) return RunSim(si);
  if (*serve) return RunServe(sv);
  return 2;
}

}  // namespace
}  // namespace groundkit

int main(int argc, char** argv) { return groundkit::Main(argc, argv); }
