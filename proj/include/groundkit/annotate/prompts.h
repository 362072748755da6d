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

#ifndef GROUNDKIT_ANNOTATE_PROMPTS_H_
#define GROUNDKIT_ANNOTATE_PROMPTS_H_

#include <map>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace groundkit {

// Multiview annotation prompt. Placeholders: {task}, {num_high},
// {num_high-1}, {num_high+num_left-1} and friends.
extern const std::string_view kAnnotationPromptTemplate;

// Single-image point-to-box prompt. Placeholder: {task}.
extern const std::string_view kPointToBoxPromptTemplate;

// Replaces every `{name}` whose name is a key of `values`. Unknown brace
// groups (the JSON schema in the templates) are copied through. The scan is
// a single pass over the template, so substituted text is never rescanned:
// braces inside a task description survive literally.
std::string SubstitutePlaceholders(
    std::string_view tmpl, const std::map<std::string, std::string>& values);

absl::StatusOr<std::string> BuildAnnotationPrompt(std::string_view task_text,
                                                  int num_high, int num_left,
                                                  int num_right);

absl::StatusOr<std::string> BuildPointToBoxPrompt(std::string_view task_text);

}  // namespace groundkit

#endif  // GROUNDKIT_ANNOTATE_PROMPTS_H_
