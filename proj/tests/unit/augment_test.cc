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

#include <cmath>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "groundkit/augment/augment.h"
#include "groundkit/core/image_io.h"
#include "groundkit/render/render.h"
#include "test_util.h"

namespace groundkit {
namespace {

using ::testing::HasSubstr;
using testing::TempDir;

// Scene channels stay below 128 so patches (>= 128 in blue) always differ
// and the marker color never appears.
ImageBuffer Scene(Rng& rng, int w, int h) {
  ImageBuffer img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.Set(x, y,
              Rgb{static_cast<uint8_t>(UniformInt(rng, 0, 127)),
                  static_cast<uint8_t>(UniformInt(rng, 0, 127)),
                  static_cast<uint8_t>(UniformInt(rng, 0, 127))});
    }
  }
  return img;
}

std::vector<ImageBuffer> Pool(Rng& rng, int n) {
  std::vector<ImageBuffer> pool;
  for (int i = 0; i < n; ++i) {
    ImageBuffer p(static_cast<int>(UniformInt(rng, 3, 20)),
                  static_cast<int>(UniformInt(rng, 3, 20)));
    for (int y = 0; y < p.height(); ++y) {
      for (int x = 0; x < p.width(); ++x) {
        p.Set(x, y, Rgb{static_cast<uint8_t>(UniformInt(rng, 0, 254)),
                        static_cast<uint8_t>(UniformInt(rng, 0, 255)),
                        static_cast<uint8_t>(UniformInt(rng, 128, 255))});
      }
    }
    pool.push_back(p);
  }
  return pool;
}

NormBox RandomBox(Rng& rng) {
  const double x0 = UniformReal(rng, 0.0, 0.8);
  const double y0 = UniformReal(rng, 0.0, 0.8);
  return NormBox{x0, y0, UniformReal(rng, x0 + 0.05, 1.0),
                 UniformReal(rng, y0 + 0.05, 1.0)};
}

TEST(ApplyShiftTest, PerPixelDisplacement) {
  Rng rng(1);
  const ImageBuffer in = Scene(rng, 200, 200);
  const ImageBuffer out = ApplyShift(in, 10, -5, FillMode::kBlack);
  EXPECT_EQ(out.At(50, 50), in.At(40, 55));
  for (int y = 0; y < 200; ++y) {
    for (int x = 0; x < 200; ++x) {
      const int sx = x - 10;
      const int sy = y + 5;
      const Rgb want = (sx >= 0 && sy < 200) ? in.At(sx, sy) : Rgb{};
      ASSERT_EQ(out.At(x, y), want) << x << "," << y;
    }
  }
  EXPECT_EQ(ApplyShift(in, 0, 0, FillMode::kBlack), in);
}

TEST(ApplyShiftTest, EdgeReplicateFill) {
  Rng rng(2);
  const ImageBuffer in = Scene(rng, 30, 20);
  const ImageBuffer out = ApplyShift(in, 4, 3, FillMode::kEdgeReplicate);
  EXPECT_EQ(out.At(0, 0), in.At(0, 0));
  EXPECT_EQ(out.At(2, 10), in.At(0, 7));
  EXPECT_EQ(out.At(10, 1), in.At(6, 0));
}

TEST(RandomTranslateTest, ZeroShiftIsIdentity) {
  Rng rng(3);
  const ImageBuffer in = Scene(rng, 64, 48);
  const NormBox box{0.25, 0.25, 0.5, 0.75};
  TranslateParams params;
  params.max_shift_frac_x = 0;
  params.max_shift_frac_y = 0;
  auto r = RandomTranslate(in, box, params, rng);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->image, in);
  EXPECT_EQ(r->box, box);
  EXPECT_EQ(r->dx, 0);
  EXPECT_EQ(r->dy, 0);
}

TEST(RandomTranslateTest, ShiftBoundOnTenThousandDraws) {
  const ImageBuffer in(640, 8);
  const NormBox box{0.4, 0.0, 0.6, 1.0};
  TranslateParams params;
  params.max_shift_frac_y = 0;
  Rng rng(4);
  int min_dx = 0;
  int max_dx = 0;
  for (int i = 0; i < 10000; ++i) {
    auto r = RandomTranslate(in, box, params, rng);
    ASSERT_TRUE(r.ok());
    ASSERT_LE(std::abs(r->dx), 64);
    min_dx = std::min(min_dx, r->dx);
    max_dx = std::max(max_dx, r->dx);
  }
  EXPECT_EQ(min_dx, -64);
  EXPECT_EQ(max_dx, 64);
}

TEST(RandomTranslateTest, BoxMovesWithContent) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = static_cast<int>(UniformInt(rng, 20, 90));
    const int h = static_cast<int>(UniformInt(rng, 20, 90));
    const ImageBuffer in = Scene(rng, w, h);
    const NormBox box = RandomBox(rng);
    TranslateParams params;
    params.max_shift_frac_x = 0.3;
    params.max_shift_frac_y = 0.3;
    auto r = RandomTranslate(in, box, params, rng);
    ASSERT_TRUE(r.ok());
    const PixelBox before = NormToPixel(box, w, h);
    if (r->skipped) continue;
    const PixelBox want =
        ClipToImage(Translate(before, r->dx, r->dy), w, h);
    ASSERT_EQ(r->pixel_box, want);
    ASSERT_EQ(NormToPixel(r->box, w, h), want);
    for (int y = want.y_min; y < want.y_max; ++y) {
      for (int x = want.x_min; x < want.x_max; ++x) {
        ASSERT_EQ(r->image.At(x, y), in.At(x - r->dx, y - r->dy));
      }
    }
    ASSERT_GE(static_cast<double>(want.Area()), 0.5 * before.Area());
  }
}

TEST(RandomTranslateTest, ExhaustedRetriesReturnOriginalWithFlag) {
  const ImageBuffer in(100, 100, Rgb{1, 2, 3});
  const NormBox full{0, 0, 1, 1};
  TranslateParams params;
  params.max_shift_frac_x = 0.99;
  params.max_shift_frac_y = 0.99;
  int skipped = 0;
  for (uint64_t seed = 0; seed < 200 && skipped == 0; ++seed) {
    Rng rng(seed);
    auto r = RandomTranslate(in, full, params, rng);
    ASSERT_TRUE(r.ok());
    if (r->skipped) {
      ++skipped;
      EXPECT_EQ(r->image, in);
      EXPECT_EQ(r->box, full);
    }
  }
  EXPECT_EQ(skipped, 1);
}

TEST(RandomTranslateTest, RejectsBadParams) {
  Rng rng(6);
  TranslateParams params;
  params.max_shift_frac_x = 1.0;
  EXPECT_FALSE(
      RandomTranslate(ImageBuffer(4, 4), NormBox{}, params, rng).ok());
}

TEST(CutMixTest, ZeroProbabilityIsIdentity) {
  Rng rng(7);
  const ImageBuffer in = Scene(rng, 50, 40);
  CutMixParams params;
  params.apply_prob = 0.0;
  auto r = CutMixInBox(in, NormBox{0.1, 0.1, 0.9, 0.9}, params, rng);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->applied);
  EXPECT_EQ(r->image, in);
}

TEST(CutMixTest, FullRangeReplacesWholeBox) {
  Rng rng(8);
  const ImageBuffer in = Scene(rng, 80, 60);
  CutMixParams params;
  params.apply_prob = 1.0;
  params.area_frac_lo = params.area_frac_hi = 1.0;
  params.patch_pool = Pool(rng, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const NormBox box = RandomBox(rng);
    auto r = CutMixInBox(in, box, params, rng);
    ASSERT_TRUE(r.ok());
    const PixelBox p = NormToPixel(box, 80, 60);
    EXPECT_EQ(r->rect, p);
    EXPECT_EQ(CountChangedPixels(in, r->image), p.Area());
  }
}

TEST(CutMixTest, AreaFractionAndLocalityOverThousandSeeds) {
  Rng scene_rng(9);
  const ImageBuffer in = Scene(scene_rng, 96, 72);
  CutMixParams params;
  params.apply_prob = 1.0;
  params.area_frac_lo = 0.1;
  params.area_frac_hi = 0.5;
  params.patch_pool = Pool(scene_rng, 5);
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const NormBox box = RandomBox(rng);
    auto r = CutMixInBox(in, box, params, rng);
    ASSERT_TRUE(r.ok());
    const PixelBox p = NormToPixel(box, 96, 72);
    int64_t changed = 0;
    for (int y = 0; y < 72; ++y) {
      for (int x = 0; x < 96; ++x) {
        if (in.At(x, y) == r->image.At(x, y)) continue;
        ASSERT_TRUE(p.Contains(x, y)) << "seed " << seed;
        ++changed;
      }
    }
    const double slack = std::max(p.Width(), p.Height());
    ASSERT_GE(changed, 0.1 * p.Area() - slack) << "seed " << seed;
    ASSERT_LE(changed, 0.5 * p.Area() + slack) << "seed " << seed;
  }
}

TEST(CutMixTest, EmptyPoolIsConfigurationError) {
  Rng rng(10);
  CutMixParams params;
  params.apply_prob = 0.5;
  auto r = CutMixInBox(ImageBuffer(8, 8), NormBox{}, params, rng);
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(r.status().message(), HasSubstr("patch pool is empty"));
}

TEST(CutMixTest, PoolLoadingClampsMarkerColor) {
  TempDir tmp;
  ImageBuffer red(4, 4, kMarkerColor);
  ASSERT_TRUE(SavePng(red, tmp.path() / "a.png").ok());
  ASSERT_TRUE(WriteFileBytes(tmp.path() / "notes.txt", "x").ok());
  auto pool = LoadPatchPool(tmp.path());
  ASSERT_TRUE(pool.ok()) << pool.status();
  ASSERT_EQ(pool->size(), 1u);
  EXPECT_EQ((*pool)[0].At(0, 0), (Rgb{254, 0, 0}));
}

GroundedInstruction Grounded(const ImageBuffer& scene, const NormBox& box,
                             GroundingFormat format) {
  return MakeGroundedInstruction(scene, box, "pick up", format,
                                 DefaultOverlayStyle(scene.width(),
                                                     scene.height()));
}

TEST(AugmentSampleTest, BothDisabledIsIdentityForAllFormats) {
  Rng rng(11);
  const ImageBuffer scene = Scene(rng, 64, 48);
  TranslateParams t;
  t.max_shift_frac_x = t.max_shift_frac_y = 0;
  CutMixParams c;
  for (GroundingFormat f : {GroundingFormat::kBoxOverlay,
                            GroundingFormat::kObjectMask,
                            GroundingFormat::kBoxText}) {
    const GroundedInstruction gi = Grounded(scene, NormBox{0.2, 0.3, 0.6, 0.9}, f);
    auto r = AugmentSample(gi, t, c, 99);
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_EQ(r->instruction, gi);
  }
}

TEST(AugmentSampleTest, DeterministicAndDetectable) {
  Rng rng(12);
  TranslateParams t;
  t.fill = FillMode::kEdgeReplicate;
  CutMixParams c;
  c.apply_prob = 1.0;
  c.patch_pool = Pool(rng, 4);
  // Some pool pixels are pure marker red before clamping.
  c.patch_pool[0].Set(0, 0, kMarkerColor);
  ReserveMarkerColor(c.patch_pool[0]);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = static_cast<int>(UniformInt(rng, 24, 120));
    const int h = static_cast<int>(UniformInt(rng, 24, 120));
    const GroundedInstruction gi =
        Grounded(Scene(rng, w, h), RandomBox(rng), GroundingFormat::kBoxOverlay);
    const uint64_t seed = rng();
    auto a = AugmentSample(gi, t, c, seed);
    auto b = AugmentSample(gi, t, c, seed);
    ASSERT_TRUE(a.ok() && b.ok());
    ASSERT_EQ(a->instruction, b->instruction);
    auto detected = DetectOverlay(a->instruction.grounded_image,
                                  DefaultOverlayStyle(w, h));
    ASSERT_TRUE(detected.ok());
    ASSERT_EQ(*detected, a->translate.pixel_box);
    ASSERT_EQ(NormToPixel(a->instruction.box, w, h), *detected);
  }
}

TEST(AugmentSampleTest, BoxTextCoordinatesFollowShift) {
  Rng rng(13);
  const ImageBuffer scene = Scene(rng, 100, 80);
  const GroundedInstruction gi =
      Grounded(scene, NormBox{0.4, 0.4, 0.6, 0.6}, GroundingFormat::kBoxText);
  ASSERT_EQ(gi.text, "pick up x1=40, y1=32, x2=60, y2=48");
  auto r = AugmentSample(gi, TranslateParams{}, CutMixParams{}, 5);
  ASSERT_TRUE(r.ok());
  const PixelBox p = r->translate.pixel_box;
  EXPECT_EQ(r->instruction.text,
            RenderBoxText("pick up", r->instruction.box, 100, 80));
  EXPECT_EQ(p, Translate(PixelBox{40, 32, 60, 48}, r->translate.dx,
                         r->translate.dy));
}

TEST(AugmentSampleTest, MaskFormatStaysMasked) {
  Rng rng(14);
  const ImageBuffer scene = Scene(rng, 60, 60);
  const GroundedInstruction gi =
      Grounded(scene, NormBox{0.3, 0.3, 0.7, 0.7}, GroundingFormat::kObjectMask);
  TranslateParams t;
  t.fill = FillMode::kEdgeReplicate;
  auto r = AugmentSample(gi, t, CutMixParams{}, 17);
  ASSERT_TRUE(r.ok());
  const PixelBox p = r->translate.pixel_box;
  for (int y = 0; y < 60; ++y) {
    for (int x = 0; x < 60; ++x) {
      if (!p.Contains(x, y)) {
        ASSERT_EQ(r->instruction.grounded_image.At(x, y), (Rgb{}));
      }
    }
  }
}

TEST(AugmentBatchTest, ParallelEqualsSequential) {
  Rng rng(15);
  std::vector<AugmentJob> jobs;
  for (int i = 0; i < 40; ++i) {
    jobs.push_back({"ep" + std::to_string(i % 7), static_cast<uint64_t>(i),
                    Grounded(Scene(rng, 40, 30), RandomBox(rng),
                             GroundingFormat::kBoxOverlay)});
  }
  CutMixParams c;
  c.apply_prob = 0.5;
  c.patch_pool = Pool(rng, 3);
  auto seq = AugmentBatch(jobs, TranslateParams{}, c, 42, 1);
  auto par = AugmentBatch(jobs, TranslateParams{}, c, 42, 4);
  ASSERT_EQ(seq.size(), par.size());
  for (size_t i = 0; i < seq.size(); ++i) {
    ASSERT_TRUE(seq[i].ok() && par[i].ok());
    EXPECT_EQ(seq[i]->instruction, par[i]->instruction);
  }
  EXPECT_NE(SampleSeed(42, "ep1", 1), SampleSeed(42, "ep1", 2));
  EXPECT_NE(SampleSeed(42, "ep1", 1), SampleSeed(42, "ep2", 1));
}

}  // namespace
}  // namespace groundkit
