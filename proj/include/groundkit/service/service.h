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

#ifndef GROUNDKIT_SERVICE_SERVICE_H_
#define GROUNDKIT_SERVICE_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "groundkit/annotate/client.h"
#include "groundkit/ingest/episode.h"
#include "groundkit/sim/trial.h"

namespace groundkit {

inline constexpr std::string_view kApiVersion = "v1";

struct ServiceConfig {
  // Null means annotation and point-to-box answer 503.
  std::shared_ptr<ModelClient> client;
  // True when `client` talks to a real model with a credential.
  bool credential_configured = false;
  // Session i (1-based) gets DeriveSeed(base_seed, "session", i) unless the
  // create request names a seed.
  uint64_t base_seed = 0;
  TrialProtocol protocol;
  // Relative episode paths resolve here.
  std::filesystem::path episodes_root;
  int frames = kDefaultSampledFrames;
};

struct HttpResponse {
  int status = 200;
  std::string body;  // Always a JSON document.
};

struct Session;

// Routes `/v1/...` (or unprefixed) requests to handlers. Safe to call from
// many threads; calls on one session run one at a time.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse Handle(std::string_view method, std::string_view path,
                      std::string_view body);

  const ServiceConfig& config() const { return config_; }

 private:
  std::shared_ptr<Session> FindSession(const std::string& id);

  ServiceConfig config_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  int next_session_ = 1;
};

// HTTP/1.1 front end over a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds `host:port`; port 0 picks a free port. Returns the bound port.
  absl::StatusOr<int> Bind(const std::string& host, int port);
  // Serves until Stop(). Requires a successful Bind().
  absl::Status Listen();
  // Blocks until a concurrent Listen() accepts connections.
  void WaitUntilReady();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace groundkit

#endif  // GROUNDKIT_SERVICE_SERVICE_H_
