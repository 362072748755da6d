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

#include "groundkit/augment/augment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "absl/strings/str_cat.h"
#include "groundkit/core/hash.h"
#include "groundkit/core/image_io.h"
#include "groundkit/core/status_macros.h"
#include "groundkit/render/render.h"

namespace groundkit {
namespace {

namespace fs = std::filesystem;

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

absl::Status TranslateParams::Validate() const {
  for (double f : {max_shift_frac_x, max_shift_frac_y}) {
    if (!(f >= 0.0 && f < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("max shift fraction must be in [0, 1), got ", f));
    }
  }
  return absl::OkStatus();
}

absl::Status CutMixParams::Validate() const {
  if (!(apply_prob >= 0.0 && apply_prob <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("apply_prob must be in [0, 1], got ", apply_prob));
  }
  if (!(area_frac_lo >= 0.0 && area_frac_lo <= area_frac_hi &&
        area_frac_hi <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "area fraction range must satisfy 0 <= lo <= hi <= 1, got (",
        area_frac_lo, ", ", area_frac_hi, ")"));
  }
  if (apply_prob > 0.0 && patch_pool.empty()) {
    return absl::FailedPreconditionError(
        "cutmix patch pool is empty but apply_prob > 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<ImageBuffer>> LoadPatchPool(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    return absl::NotFoundError(
        absl::StrCat("patch pool directory not found: ", dir.string()));
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ImageBuffer> pool;
  for (const fs::path& f : files) {
    GK_ASSIGN_OR_RETURN(std::string bytes, ReadFileBytes(f));
    if (DetectImageFormat(bytes) == ImageFormat::kUnknown) continue;
    GK_ASSIGN_OR_RETURN(ImageBuffer img, DecodeImage(bytes));
    ReserveMarkerColor(img);
    pool.push_back(std::move(img));
  }
  return pool;
}

ImageBuffer ApplyShift(const ImageBuffer& image, int dx, int dy,
                       FillMode fill) {
  const int w = image.width();
  const int h = image.height();
  ImageBuffer out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = y - dy;
    for (int x = 0; x < w; ++x) {
      const int sx = x - dx;
      if (sx >= 0 && sx < w && sy >= 0 && sy < h) {
        out.Set(x, y, image.At(sx, sy));
      } else if (fill == FillMode::kEdgeReplicate) {
        out.Set(x, y,
                image.At(std::clamp(sx, 0, w - 1), std::clamp(sy, 0, h - 1)));
      }
    }
  }
  return out;
}

absl::StatusOr<TranslateResult> RandomTranslate(const ImageBuffer& image,
                                                const NormBox& box,
                                                const TranslateParams& params,
                                                Rng& rng) {
  GK_RETURN_IF_ERROR(params.Validate());
  GK_RETURN_IF_ERROR(box.Validate());
  const int w = image.width();
  const int h = image.height();
  const PixelBox pbox = NormToPixel(box, w, h);
  const int max_dx = static_cast<int>(std::floor(params.max_shift_frac_x * w));
  const int max_dy = static_cast<int>(std::floor(params.max_shift_frac_y * h));
  for (int attempt = 0; attempt < kMaxTranslateRetries; ++attempt) {
    const int dx = static_cast<int>(UniformInt(rng, -max_dx, max_dx));
    const int dy = static_cast<int>(UniformInt(rng, -max_dy, max_dy));
    const PixelBox moved = ClipToImage(Translate(pbox, dx, dy), w, h);
    if (moved.Width() <= 0 || moved.Height() <= 0 ||
        static_cast<double>(moved.Area()) <
            kMinVisibleFraction * static_cast<double>(pbox.Area())) {
      continue;
    }
    TranslateResult out;
    out.image = ApplyShift(image, dx, dy, params.fill);
    GK_ASSIGN_OR_RETURN(out.box, PixelToNorm(moved, w, h));
    // An axis that neither moved nor got clipped keeps its exact input
    // coordinates, so a zero shift is the identity on the box too.
    if (dx == 0 && moved.x_min == pbox.x_min && moved.x_max == pbox.x_max) {
      out.box.x_min = box.x_min;
      out.box.x_max = box.x_max;
    }
    if (dy == 0 && moved.y_min == pbox.y_min && moved.y_max == pbox.y_max) {
      out.box.y_min = box.y_min;
      out.box.y_max = box.y_max;
    }
    out.pixel_box = moved;
    out.dx = dx;
    out.dy = dy;
    return out;
  }
  TranslateResult out;
  out.image = image;
  out.box = box;
  out.pixel_box = pbox;
  out.skipped = true;
  return out;
}

absl::StatusOr<CutMixResult> CutMixInBox(const ImageBuffer& image,
                                         const NormBox& box,
                                         const CutMixParams& params,
                                         Rng& rng) {
  GK_RETURN_IF_ERROR(params.Validate());
  GK_RETURN_IF_ERROR(box.Validate());
  CutMixResult out;
  out.image = image;
  // The gate is always drawn so later draws do not depend on apply_prob.
  if (UniformUnit(rng) >= params.apply_prob) return out;

  const PixelBox p = NormToPixel(box, image.width(), image.height());
  const double area =
      UniformReal(rng, params.area_frac_lo, params.area_frac_hi) *
      static_cast<double>(p.Area());
  const double aspect = UniformReal(rng, 0.5, 2.0);
  int rw = std::clamp(static_cast<int>(std::lround(std::sqrt(area * aspect))),
                      1, p.Width());
  int rh = std::clamp(static_cast<int>(std::lround(area / rw)), 1, p.Height());
  if (rh == p.Height()) {
    rw = std::clamp(static_cast<int>(std::lround(area / rh)), 1, p.Width());
  }
  const int x0 = static_cast<int>(UniformInt(rng, p.x_min, p.x_max - rw));
  const int y0 = static_cast<int>(UniformInt(rng, p.y_min, p.y_max - rh));
  const int patch_index = static_cast<int>(
      UniformInt(rng, 0, static_cast<int64_t>(params.patch_pool.size()) - 1));
  const ImageBuffer patch =
      ResizeNearest(params.patch_pool[patch_index], rw, rh);
  for (int y = 0; y < rh; ++y) {
    for (int x = 0; x < rw; ++x) out.image.Set(x0 + x, y0 + y, patch.At(x, y));
  }
  out.applied = true;
  out.rect = PixelBox{x0, y0, x0 + rw, y0 + rh};
  out.patch_index = patch_index;
  return out;
}

uint64_t SampleSeed(uint64_t seed, const std::string& episode_id,
                    uint64_t index) {
  return seed ^ Fnv1a64(absl::StrCat(episode_id, "#", index));
}

absl::StatusOr<AugmentResult> AugmentSample(const GroundedInstruction& input,
                                            const TranslateParams& translate,
                                            const CutMixParams& cutmix,
                                            uint64_t sample_seed) {
  GK_RETURN_IF_ERROR(input.Validate());
  Rng rng(sample_seed);
  const ImageBuffer& img = input.grounded_image;
  const int w = img.width();
  const int h = img.height();

  AugmentResult result;
  GK_ASSIGN_OR_RETURN(result.cutmix, CutMixInBox(img, input.box, cutmix, rng));
  GK_ASSIGN_OR_RETURN(result.translate,
                      RandomTranslate(result.cutmix.image, input.box,
                                      translate, rng));
  ImageBuffer moved = std::move(result.translate.image);
  result.cutmix.image = ImageBuffer();
  result.translate.image = ImageBuffer();

  GroundedInstruction& out = result.instruction;
  out.format = input.format;
  out.box = result.translate.box;
  const PixelBox& pbox = result.translate.pixel_box;
  switch (input.format) {
    case GroundingFormat::kBoxOverlay: {
      // Fill (edge replicate) may copy marker pixels; clear the reserved
      // color everywhere, then redraw the band at the moved box. Every old
      // band pixel still in frame lies inside the new band.
      ReserveMarkerColor(moved);
      out.grounded_image = RenderOverlay(moved, pbox, DefaultOverlayStyle(w, h));
      out.text = input.text;
      break;
    }
    case GroundingFormat::kObjectMask:
      out.grounded_image = RenderMask(moved, pbox);
      out.text = input.text;
      break;
    case GroundingFormat::kBoxText: {
      out.grounded_image = std::move(moved);
      const std::string old_suffix = RenderBoxText("", input.box, w, h);
      if (!EndsWith(input.text, old_suffix)) {
        return absl::InvalidArgumentError(
            "box-text instruction does not end with its box coordinates");
      }
      out.text = RenderBoxText(
          input.text.substr(0, input.text.size() - old_suffix.size()),
          out.box, w, h);
      break;
    }
  }
  return result;
}

std::vector<absl::StatusOr<AugmentResult>> AugmentBatch(
    const std::vector<AugmentJob>& jobs, const TranslateParams& translate,
    const CutMixParams& cutmix, uint64_t seed, int threads) {
  std::vector<absl::StatusOr<AugmentResult>> results(
      jobs.size(), absl::UnknownError("not run"));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      results[i] =
          AugmentSample(jobs[i].instruction, translate, cutmix,
                        SampleSeed(seed, jobs[i].episode_id, jobs[i].index));
    }
  };
  const int n = std::clamp<int>(threads, 1,
                                std::max<int>(1, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return results;
}

}  // namespace groundkit
