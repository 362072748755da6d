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

#ifndef GROUNDKIT_AUGMENT_AUGMENT_H_
#define GROUNDKIT_AUGMENT_AUGMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "groundkit/core/box.h"
#include "groundkit/core/image.h"
#include "groundkit/core/instruction.h"
#include "groundkit/core/random.h"

namespace groundkit {

enum class FillMode { kBlack, kEdgeReplicate };

struct TranslateParams {
  double max_shift_frac_x = 0.10;
  double max_shift_frac_y = 0.10;
  FillMode fill = FillMode::kBlack;

  absl::Status Validate() const;
};

struct CutMixParams {
  double apply_prob = 0.0;
  double area_frac_lo = 0.1;
  double area_frac_hi = 0.5;
  // Replacement patches. Pixels equal to the marker color are nudged when
  // the pool is loaded so patches never forge a marker.
  std::vector<ImageBuffer> patch_pool;

  absl::Status Validate() const;
};

// Loads every decodable image in `dir` (sorted by file name).
absl::StatusOr<std::vector<ImageBuffer>> LoadPatchPool(
    const std::filesystem::path& dir);

// Shift whose translated box keeps at least this share of its area in frame.
inline constexpr double kMinVisibleFraction = 0.5;
inline constexpr int kMaxTranslateRetries = 16;

// Output pixel (x, y) = input pixel (x - dx, y - dy) where that exists,
// otherwise the fill.
ImageBuffer ApplyShift(const ImageBuffer& image, int dx, int dy, FillMode fill);

struct TranslateResult {
  ImageBuffer image;
  NormBox box;
  PixelBox pixel_box;  // Shifted and clipped.
  int dx = 0;
  int dy = 0;
  // Set when no sampled shift kept the box visible enough; `image` and `box`
  // are then the input unchanged.
  bool skipped = false;
};

absl::StatusOr<TranslateResult> RandomTranslate(const ImageBuffer& image,
                                                const NormBox& box,
                                                const TranslateParams& params,
                                                Rng& rng);

struct CutMixResult {
  ImageBuffer image;
  bool applied = false;
  PixelBox rect;  // Replaced region when applied.
  int patch_index = -1;
};

absl::StatusOr<CutMixResult> CutMixInBox(const ImageBuffer& image,
                                         const NormBox& box,
                                         const CutMixParams& params, Rng& rng);

// seed xor Fnv1a64(episode_id + "#" + index).
uint64_t SampleSeed(uint64_t seed, const std::string& episode_id,
                    uint64_t index);

struct AugmentResult {
  GroundedInstruction instruction;
  TranslateResult translate;  // image field left empty.
  CutMixResult cutmix;        // image field left empty.
};

// CutMix in the original box, then translation, then the grounding cue is
// rebuilt for the moved box: overlay re-drawn, mask re-applied, box-text
// coordinates rewritten.
absl::StatusOr<AugmentResult> AugmentSample(const GroundedInstruction& input,
                                            const TranslateParams& translate,
                                            const CutMixParams& cutmix,
                                            uint64_t sample_seed);

struct AugmentJob {
  std::string episode_id;
  uint64_t index = 0;
  GroundedInstruction instruction;
};

// Augments every job with its own SampleSeed stream on `threads` workers.
// The output is independent of the thread count.
std::vector<absl::StatusOr<AugmentResult>> AugmentBatch(
    const std::vector<AugmentJob>& jobs, const TranslateParams& translate,
    const CutMixParams& cutmix, uint64_t seed, int threads);

}  // namespace groundkit

#endif  // GROUNDKIT_AUGMENT_AUGMENT_H_
