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

#ifndef GROUNDKIT_CORE_STATUS_MACROS_H_
#define GROUNDKIT_CORE_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define GK_STATUS_CONCAT_INNER_(a, b) a##b
#define GK_STATUS_CONCAT_(a, b) GK_STATUS_CONCAT_INNER_(a, b)

#define GK_RETURN_IF_ERROR(expr)                  \
  do {                                            \
    if (::absl::Status _gk_status = (expr);       \
        !_gk_status.ok()) {                       \
      return _gk_status;                          \
    }                                             \
  } while (0)

#define GK_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                              \
  if (!tmp.ok()) return tmp.status();             \
  lhs = std::move(*tmp)

#define GK_ASSIGN_OR_RETURN(lhs, expr) \
  GK_ASSIGN_OR_RETURN_IMPL_(           \
      GK_STATUS_CONCAT_(_gk_statusor_, __LINE__), lhs, expr)

#endif  // GROUNDKIT_CORE_STATUS_MACROS_H_
