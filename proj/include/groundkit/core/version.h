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

#ifndef GROUNDKIT_CORE_VERSION_H_
#define GROUNDKIT_CORE_VERSION_H_

#include <string_view>

namespace groundkit {

// Set from the CMake project version.
inline constexpr std::string_view kGroundkitVersion = GROUNDKIT_VERSION_STRING;

}  // namespace groundkit

#endif  // GROUNDKIT_CORE_VERSION_H_
