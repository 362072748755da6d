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

#ifndef GROUNDKIT_CORE_HASH_H_
#define GROUNDKIT_CORE_HASH_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace groundkit {

// Incremental SHA-256 (OpenSSL EVP). Stable across runs and platforms, which
// std::hash and absl::Hash are not.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void Update(std::string_view data);
  void Update(std::span<const uint8_t> data);
  std::string HexDigest();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string Sha256Hex(std::string_view data);

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view data);

}  // namespace groundkit

#endif  // GROUNDKIT_CORE_HASH_H_
