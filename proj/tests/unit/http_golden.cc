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

#include "http_golden.h"

#include <cstdlib>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "groundkit/core/hash.h"
#include "groundkit/core/image_io.h"
#include "json.hpp"
#include "test_util.h"

namespace groundkit::testing {
namespace {

using Json = nlohmann::ordered_json;

void Redact(Json& j) {
  if (j.is_object()) {
    for (auto& [key, value] : j.items()) {
      if (absl::EndsWith(key, "_png_base64") && value.is_string()) {
        value = absl::StrCat("sha256:", Sha256Hex(value.get<std::string>()));
      } else {
        Redact(value);
      }
    }
  } else if (j.is_array()) {
    for (Json& v : j) Redact(v);
  }
}

std::filesystem::path HttpTestdata(const std::string& file) {
  return TestdataPath(absl::StrCat("http/", file));
}

}  // namespace

void WriteGoldenEpisodes(const std::filesystem::path& root) {
  WriteEpisodeFixture(root, kGoldenEpisodeId, "pick up the red object", 40);
}

absl::StatusOr<ServiceConfig> GoldenServiceConfig(
    const std::filesystem::path& episodes_root) {
  absl::StatusOr<std::unique_ptr<ReplayClient>> tape =
      ReplayClient::FromFile(HttpTestdata("mock_tape.json"));
  if (!tape.ok()) return tape.status();
  ServiceConfig config;
  config.client = std::shared_ptr<ModelClient>(std::move(*tape));
  config.episodes_root = episodes_root;
  return config;
}

absl::StatusOr<std::string> RunGoldenFlow(Service& service,
                                          const std::string& name) {
  absl::StatusOr<std::string> text =
      ReadFileBytes(HttpTestdata(absl::StrCat(name, ".requests.json")));
  if (!text.ok()) return text.status();
  Json requests = Json::parse(*text, nullptr, false);
  if (requests.is_discarded() || !requests.is_array()) {
    return absl::InvalidArgumentError("requests file must be a JSON array");
  }
  Json transcript = Json::array();
  for (const Json& r : requests) {
    const std::string method = r.at("method").get<std::string>();
    const std::string path = r.at("path").get<std::string>();
    const std::string body = r.at("body").is_null() ? "" : r.at("body").dump();
    HttpResponse resp = service.Handle(method, path, body);
    Json parsed = Json::parse(resp.body, nullptr, false);
    if (parsed.is_discarded()) {
      return absl::InternalError(absl::StrCat("non-JSON body for ", path));
    }
    Redact(parsed);
    Json step;
    step["request"] = {{"method", method}, {"path", path}};
    step["status"] = resp.status;
    step["body_sha256"] = Sha256Hex(resp.body);
    step["body"] = std::move(parsed);
    transcript.push_back(std::move(step));
  }
  return transcript.dump(2) + "\n";
}

absl::Status CheckGolden(const std::string& name, const std::string& actual) {
  const std::filesystem::path path =
      HttpTestdata(absl::StrCat(name, ".golden.json"));
  if (std::getenv("GROUNDKIT_UPDATE_GOLDENS") != nullptr) {
    return WriteFileBytes(path, actual);
  }
  absl::StatusOr<std::string> expected = ReadFileBytes(path);
  if (!expected.ok()) return expected.status();
  if (*expected != actual) {
    return absl::DataLossError(absl::StrCat(
        path.string(), " differs from the replayed transcript; rerun with "
                       "GROUNDKIT_UPDATE_GOLDENS=1 after reviewing the diff"));
  }
  return absl::OkStatus();
}

}  // namespace groundkit::testing
