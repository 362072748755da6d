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

#ifndef GROUNDKIT_ANNOTATE_CLIENT_H_
#define GROUNDKIT_ANNOTATE_CLIENT_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "groundkit/core/image.h"

namespace groundkit {

// Multimodal model endpoint: ordered images plus a prompt in, text out.
// Implementations must be safe to call from several threads.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual absl::StatusOr<std::string> Request(
      const std::vector<ImageBuffer>& images, const std::string& prompt) = 0;
  // Short human-readable identity, e.g. "replay:tape.json".
  virtual std::string Describe() const = 0;
};

// sha256(sha256(prompt) + "\n" + ContentHash(image_i) + "\n" ...), hex.
std::string RequestFingerprint(const std::vector<ImageBuffer>& images,
                               const std::string& prompt);

// Deterministic mock. A tape is JSON:
//   {"entries": [{"fingerprint": "<hex>|*", "response": "..."}, ...]}
// An exact fingerprint match wins; otherwise the "*" entry, if any.
class ReplayClient : public ModelClient {
 public:
  explicit ReplayClient(std::map<std::string, std::string> entries,
                        std::string name = "inline");

  static absl::StatusOr<std::unique_ptr<ReplayClient>> FromFile(
      const std::filesystem::path& path);
  static absl::StatusOr<std::unique_ptr<ReplayClient>> FromJson(
      const std::string& text, std::string name = "inline");
  // Answers every request with `response`.
  static std::unique_ptr<ReplayClient> Constant(std::string response);

  absl::StatusOr<std::string> Request(const std::vector<ImageBuffer>& images,
                                      const std::string& prompt) override;
  std::string Describe() const override { return "replay:" + name_; }

  int request_count() const { return requests_.load(); }

 private:
  std::map<std::string, std::string> entries_;
  std::string name_;
  std::atomic<int> requests_{0};
};

struct HttpClientConfig {
  // Full generateContent URL, e.g.
  // https://host/v1beta/models/<model>:generateContent. A "{model}" token is
  // replaced with model_id.
  std::string endpoint;
  std::string api_key;
  std::string model_id;
  double timeout_s = 60.0;
  int max_retries = 3;
  int max_in_flight = 4;
  // Minimum spacing between request starts; 0 disables rate limiting.
  double min_interval_s = 0.0;
  double backoff_initial_s = 1.0;

  bool configured() const { return !endpoint.empty() && !api_key.empty(); }
};

// Reads GROUNDKIT_MODEL_ENDPOINT, GROUNDKIT_MODEL_API_KEY,
// GROUNDKIT_MODEL_ID, GROUNDKIT_MODEL_TIMEOUT_S, GROUNDKIT_MODEL_MAX_IN_FLIGHT,
// GROUNDKIT_MODEL_MAX_RETRIES and GROUNDKIT_MODEL_MIN_INTERVAL_S.
HttpClientConfig HttpClientConfigFromEnv();

// Client for a generateContent-style JSON API. Images are sent inline as
// base64 PNG after the prompt text. Transport errors, HTTP 429 and 5xx are
// retried with exponential backoff; other HTTP errors fail immediately.
class HttpModelClient : public ModelClient {
 public:
  explicit HttpModelClient(HttpClientConfig config);

  absl::StatusOr<std::string> Request(const std::vector<ImageBuffer>& images,
                                      const std::string& prompt) override;
  std::string Describe() const override;

  // Request body as sent on the wire. Exposed for tests.
  static std::string BuildRequestBody(const std::vector<ImageBuffer>& images,
                                      const std::string& prompt);
  // Concatenated text parts of the first candidate.
  static absl::StatusOr<std::string> ExtractResponseText(
      const std::string& body);

 private:
  absl::StatusOr<std::string> PostOnce(const std::string& body);
  void AcquireSlot();
  void ReleaseSlot();

  HttpClientConfig config_;
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  std::chrono::steady_clock::time_point next_start_{};
};

}  // namespace groundkit

#endif  // GROUNDKIT_ANNOTATE_CLIENT_H_
