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

#ifndef GROUNDKIT_CORE_IMAGE_IO_H_
#define GROUNDKIT_CORE_IMAGE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "groundkit/core/image.h"

namespace groundkit {

enum class ImageFormat { kUnknown, kPng, kJpeg };

// Sniffs the magic bytes.
ImageFormat DetectImageFormat(std::string_view bytes);

// Decodes PNG or JPEG. Gray, palette, alpha and 16-bit inputs are converted
// to RGB-8.
absl::StatusOr<ImageBuffer> DecodeImage(std::string_view bytes);

// Deterministic PNG encoding (fixed compression settings, no timestamps).
std::string EncodePng(const ImageBuffer& image);

absl::StatusOr<std::string> ReadFileBytes(const std::filesystem::path& path);
absl::Status WriteFileBytes(const std::filesystem::path& path,
                            std::string_view bytes);

absl::StatusOr<ImageBuffer> LoadImage(const std::filesystem::path& path);
absl::Status SavePng(const ImageBuffer& image,
                     const std::filesystem::path& path);

}  // namespace groundkit

#endif  // GROUNDKIT_CORE_IMAGE_IO_H_
