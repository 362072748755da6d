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

#include "groundkit/annotate/client.h"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "absl/strings/escaping.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "groundkit/annotate/record.h"
#include "groundkit/core/hash.h"
#include "groundkit/core/image_io.h"
#include "httplib.h"
#include "json.hpp"

namespace groundkit {
namespace {

using json = nlohmann::json;

std::string EnvOr(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

template <typename T>
T EnvNumber(const char* name, T fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr) return fallback;
  T out;
  if constexpr (std::is_same_v<T, int>) {
    if (absl::SimpleAtoi(std::string(v), &out)) return out;
  } else {
    if (absl::SimpleAtod(std::string(v), &out)) return out;
  }
  return fallback;
}

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path;
};

absl::StatusOr<ParsedUrl> SplitUrl(const std::string& url) {
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("endpoint is not an absolute URL: ", url));
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return ParsedUrl{url, "/"};
  return ParsedUrl{url.substr(0, path_start), url.substr(path_start)};
}

bool Retryable(int http_status) {
  return http_status == 429 || http_status >= 500;
}

}  // namespace

std::string RequestFingerprint(const std::vector<ImageBuffer>& images,
                               const std::string& prompt) {
  Sha256 h;
  h.Update(Sha256Hex(prompt));
  for (const ImageBuffer& img : images) {
    h.Update("\n");
    h.Update(ContentHash(img));
  }
  return h.HexDigest();
}

ReplayClient::ReplayClient(std::map<std::string, std::string> entries,
                           std::string name)
    : entries_(std::move(entries)), name_(std::move(name)) {}

absl::StatusOr<std::unique_ptr<ReplayClient>> ReplayClient::FromJson(
    const std::string& text, std::string name) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("entries") ||
      !j["entries"].is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat("replay tape ", name, ": expected {\"entries\": [...]}"));
  }
  std::map<std::string, std::string> entries;
  for (const json& e : j["entries"]) {
    if (!e.is_object() || !e.contains("fingerprint") ||
        !e["fingerprint"].is_string() || !e.contains("response") ||
        !e["response"].is_string()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "replay tape ", name, ": entry needs fingerprint and response"));
    }
    entries[e["fingerprint"].get<std::string>()] =
        e["response"].get<std::string>();
  }
  return std::make_unique<ReplayClient>(std::move(entries), std::move(name));
}

absl::StatusOr<std::unique_ptr<ReplayClient>> ReplayClient::FromFile(
    const std::filesystem::path& path) {
  auto text = ReadFileBytes(path);
  if (!text.ok()) return text.status();
  return FromJson(*text, path.filename().string());
}

std::unique_ptr<ReplayClient> ReplayClient::Constant(std::string response) {
  return std::make_unique<ReplayClient>(
      std::map<std::string, std::string>{{"*", std::move(response)}},
      "constant");
}

absl::StatusOr<std::string> ReplayClient::Request(
    const std::vector<ImageBuffer>& images, const std::string& prompt) {
  ++requests_;
  const std::string fp = RequestFingerprint(images, prompt);
  if (auto it = entries_.find(fp); it != entries_.end()) return it->second;
  if (auto it = entries_.find("*"); it != entries_.end()) return it->second;
  return absl::NotFoundError(
      absl::StrCat("replay tape ", name_, " has no entry for ", fp));
}

HttpClientConfig HttpClientConfigFromEnv() {
  HttpClientConfig c;
  c.endpoint = EnvOr("GROUNDKIT_MODEL_ENDPOINT", "");
  c.api_key = EnvOr("GROUNDKIT_MODEL_API_KEY", "");
  c.model_id = EnvOr("GROUNDKIT_MODEL_ID", "gemini-robotics-er-1.5-preview");
  c.timeout_s = EnvNumber("GROUNDKIT_MODEL_TIMEOUT_S", c.timeout_s);
  c.max_in_flight = EnvNumber("GROUNDKIT_MODEL_MAX_IN_FLIGHT", c.max_in_flight);
  c.max_retries = EnvNumber("GROUNDKIT_MODEL_MAX_RETRIES", c.max_retries);
  c.min_interval_s =
      EnvNumber("GROUNDKIT_MODEL_MIN_INTERVAL_S", c.min_interval_s);
  return c;
}

HttpModelClient::HttpModelClient(HttpClientConfig config)
    : config_(std::move(config)) {
  if (config_.max_in_flight < 1) config_.max_in_flight = 1;
  if (config_.max_retries < 0) config_.max_retries = 0;
}

std::string HttpModelClient::Describe() const {
  return absl::StrCat("http:", config_.model_id);
}

std::string HttpModelClient::BuildRequestBody(
    const std::vector<ImageBuffer>& images, const std::string& prompt) {
  json parts = json::array();
  parts.push_back({{"text", prompt}});
  for (const ImageBuffer& img : images) {
    parts.push_back({{"inline_data",
                      {{"mime_type", "image/png"},
                       {"data", absl::Base64Escape(EncodePng(img))}}}});
  }
  json body = {{"contents", json::array({{{"role", "user"}, {"parts", parts}}})}};
  return body.dump();
}

absl::StatusOr<std::string> HttpModelClient::ExtractResponseText(
    const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    return AttachRawResponse(
        absl::UnavailableError("model response is not JSON"), body);
  }
  try {
    const json& parts = j.at("candidates").at(0).at("content").at("parts");
    std::string text;
    for (const json& p : parts) {
      if (p.contains("text")) text += p["text"].get<std::string>();
    }
    return text;
  } catch (const json::exception& e) {
    return AttachRawResponse(
        absl::UnavailableError(
            absl::StrCat("model response lacks candidate text: ", e.what())),
        body);
  }
}

void HttpModelClient::AcquireSlot() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
  ++in_flight_;
  if (config_.min_interval_s > 0) {
    const auto now = std::chrono::steady_clock::now();
    const auto start = std::max(now, next_start_);
    next_start_ = start + std::chrono::duration_cast<
                              std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(
                                  config_.min_interval_s));
    lock.unlock();
    std::this_thread::sleep_until(start);
  }
}

void HttpModelClient::ReleaseSlot() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

absl::StatusOr<std::string> HttpModelClient::PostOnce(
    const std::string& body) {
  std::string url = config_.endpoint;
  if (size_t pos = url.find("{model}"); pos != std::string::npos) {
    url.replace(pos, 7, config_.model_id);
  }
  auto parsed = SplitUrl(url);
  if (!parsed.ok()) return parsed.status();
  httplib::Client cli(parsed->scheme_host_port);
  const time_t secs = static_cast<time_t>(config_.timeout_s);
  const time_t usecs =
      static_cast<time_t>((config_.timeout_s - static_cast<double>(secs)) * 1e6);
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  httplib::Headers headers = {{"x-goog-api-key", config_.api_key}};
  auto res = cli.Post(parsed->path, headers, body, "application/json");
  if (!res) {
    return absl::UnavailableError(absl::StrCat(
        "transport error: ", httplib::to_string(res.error())));
  }
  if (res->status != 200) {
    absl::Status st =
        Retryable(res->status)
            ? absl::UnavailableError(absl::StrCat("http ", res->status))
            : absl::FailedPreconditionError(absl::StrCat("http ", res->status));
    return AttachRawResponse(st, res->body);
  }
  return ExtractResponseText(res->body);
}

absl::StatusOr<std::string> HttpModelClient::Request(
    const std::vector<ImageBuffer>& images, const std::string& prompt) {
  if (!config_.configured()) {
    return absl::FailedPreconditionError(
        "model client not configured: set GROUNDKIT_MODEL_ENDPOINT and "
        "GROUNDKIT_MODEL_API_KEY");
  }
  const std::string body = BuildRequestBody(images, prompt);
  absl::Status last;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(
          config_.backoff_initial_s * std::pow(2.0, attempt - 1)));
    }
    AcquireSlot();
    absl::StatusOr<std::string> out = PostOnce(body);
    ReleaseSlot();
    if (out.ok()) return out;
    last = out.status();
    if (!absl::IsUnavailable(last)) break;
  }
  return last;
}

}  // namespace groundkit
