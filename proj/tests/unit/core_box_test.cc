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

#include "groundkit/core/box.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "groundkit/core/random.h"

namespace groundkit {
namespace {

using ::testing::HasSubstr;

TEST(ThousandToNormTest, ReordersAndScalesPickExample) {
  auto box = ThousandToNorm({618, 411, 732, 457});
  ASSERT_TRUE(box.ok()) << box.status();
  EXPECT_EQ(box->x_min, 0.411);
  EXPECT_EQ(box->y_min, 0.618);
  EXPECT_EQ(box->x_max, 0.457);
  EXPECT_EQ(box->y_max, 0.732);
}

TEST(ThousandToNormTest, FullFrame) {
  auto box = ThousandToNorm({0, 0, 1000, 1000});
  ASSERT_TRUE(box.ok());
  EXPECT_EQ(*box, (NormBox{0.0, 0.0, 1.0, 1.0}));
}

TEST(ThousandToNormTest, ExactDivision) {
  auto box = ThousandToNorm({250, 100, 750, 900});
  ASSERT_TRUE(box.ok());
  EXPECT_EQ(*box, (NormBox{0.1, 0.25, 0.9, 0.75}));
}

TEST(ThousandToNormTest, ErrorsNameTheField) {
  auto inverted = ThousandToNorm({732, 457, 618, 411});
  ASSERT_FALSE(inverted.ok());
  EXPECT_THAT(inverted.status().message(), HasSubstr("box ordering"));
  EXPECT_THAT(inverted.status().message(), HasSubstr("y_min"));

  auto out_of_range = ThousandToNorm({0, 0, 1001, 10});
  ASSERT_FALSE(out_of_range.ok());
  EXPECT_THAT(out_of_range.status().message(), HasSubstr("y_max"));

  auto negative = ThousandToNorm({0, -1, 10, 10});
  ASSERT_FALSE(negative.ok());
  EXPECT_THAT(negative.status().message(), HasSubstr("x_min"));
}

ThousandBox RandomThousandBox(Rng& rng) {
  ThousandBox b;
  b.y_min = static_cast<int>(UniformInt(rng, 0, 999));
  b.y_max = static_cast<int>(UniformInt(rng, b.y_min + 1, 1000));
  b.x_min = static_cast<int>(UniformInt(rng, 0, 999));
  b.x_max = static_cast<int>(UniformInt(rng, b.x_min + 1, 1000));
  return b;
}

TEST(ThousandToNormTest, ValidInputNeverDegenerates) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const ThousandBox t = RandomThousandBox(rng);
    auto n = ThousandToNorm(t);
    ASSERT_TRUE(n.ok()) << t;
    EXPECT_LT(n->x_min, n->x_max);
    EXPECT_LT(n->y_min, n->y_max);
    EXPECT_TRUE(n->Validate().ok());
    auto back = NormToThousand(*n);
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, t);
  }
}

TEST(ThousandToNormTest, Monotone) {
  Rng rng(12);
  for (int i = 0; i < 5000; ++i) {
    const ThousandBox small = RandomThousandBox(rng);
    ThousandBox big = small;
    big.y_min = static_cast<int>(UniformInt(rng, 0, small.y_min));
    big.x_min = static_cast<int>(UniformInt(rng, 0, small.x_min));
    big.y_max = static_cast<int>(UniformInt(rng, small.y_max, 1000));
    big.x_max = static_cast<int>(UniformInt(rng, small.x_max, 1000));
    const NormBox a = *ThousandToNorm(small);
    const NormBox b = *ThousandToNorm(big);
    EXPECT_GE(b.x_max - b.x_min, a.x_max - a.x_min);
    EXPECT_GE(b.y_max - b.y_min, a.y_max - a.y_min);
    EXPECT_LE(b.x_min, a.x_min);
    EXPECT_GE(b.y_max, a.y_max);
  }
}

TEST(NormToPixelTest, IdentityScaling) {
  EXPECT_EQ(NormToPixel({0.0, 0.0, 1.0, 1.0}, 640, 480),
            (PixelBox{0, 0, 640, 480}));
}

TEST(NormToPixelTest, FloorCeilOnThousandGrid) {
  EXPECT_EQ(NormToPixel({0.411, 0.618, 0.457, 0.732}, 1000, 1000),
            (PixelBox{411, 618, 457, 732}));
}

TEST(NormToPixelTest, DegenerateRoundingExpandsMaxEdge) {
  // floor(50) = 50, ceil(50.04) = 51.
  EXPECT_EQ(NormToPixel({0.5, 0.5, 0.5004, 0.5004}, 100, 100),
            (PixelBox{50, 50, 51, 51}));
  // Both edges snap to 50: the max edge grows by one.
  EXPECT_EQ(NormToPixel({0.5, 0.5, 0.5 + 1e-12, 0.5 + 1e-12}, 100, 100),
            (PixelBox{50, 50, 51, 51}));
  // At the right/bottom border the min edge moves instead.
  EXPECT_EQ(NormToPixel({1.0 - 1e-12, 1.0 - 1e-12, 1.0, 1.0}, 100, 100),
            (PixelBox{99, 99, 100, 100}));
}

TEST(PixelToNormTest, Examples) {
  auto full = PixelToNorm({0, 0, 640, 480}, 640, 480);
  ASSERT_TRUE(full.ok());
  EXPECT_EQ(*full, (NormBox{0, 0, 1, 1}));

  auto pick = PixelToNorm({411, 618, 457, 732}, 1000, 1000);
  ASSERT_TRUE(pick.ok());
  EXPECT_EQ(*pick, (NormBox{0.411, 0.618, 0.457, 0.732}));
}

TEST(PixelToNormTest, DimensionMismatch) {
  auto r = PixelToNorm({0, 0, 641, 480}, 640, 480);
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(r.status().message(), HasSubstr("dimension mismatch"));
  EXPECT_FALSE(PixelToNorm({0, 0, 10, 10}, 0, 10).ok());
}

TEST(PixelToNormTest, RoundTripIsExact) {
  Rng rng(13);
  for (int i = 0; i < 10000; ++i) {
    const int w = static_cast<int>(UniformInt(rng, 1, 4096));
    const int h = static_cast<int>(UniformInt(rng, 1, 4096));
    PixelBox b;
    b.x_min = static_cast<int>(UniformInt(rng, 0, w - 1));
    b.x_max = static_cast<int>(UniformInt(rng, b.x_min + 1, w));
    b.y_min = static_cast<int>(UniformInt(rng, 0, h - 1));
    b.y_max = static_cast<int>(UniformInt(rng, b.y_min + 1, h));
    auto n = PixelToNorm(b, w, h);
    ASSERT_TRUE(n.ok());
    ASSERT_EQ(NormToPixel(*n, w, h), b) << w << "x" << h;
  }
}

TEST(BoxIouTest, Examples) {
  const PixelBox a{0, 0, 10, 10};
  EXPECT_EQ(BoxIou(a, a), 1.0);
  EXPECT_EQ(BoxIou(a, {20, 20, 30, 30}), 0.0);
  EXPECT_DOUBLE_EQ(BoxIou(a, {5, 0, 15, 10}), 50.0 / 150.0);
  // Touching edges do not intersect for half-open boxes.
  EXPECT_EQ(BoxIou(a, {10, 0, 20, 10}), 0.0);
}

TEST(BoxIouTest, SymmetricAndZeroIffDisjoint) {
  Rng rng(14);
  auto random_box = [&rng] {
    PixelBox b;
    b.x_min = static_cast<int>(UniformInt(rng, 0, 99));
    b.x_max = static_cast<int>(UniformInt(rng, b.x_min + 1, 100));
    b.y_min = static_cast<int>(UniformInt(rng, 0, 99));
    b.y_max = static_cast<int>(UniformInt(rng, b.y_min + 1, 100));
    return b;
  };
  for (int i = 0; i < 5000; ++i) {
    const PixelBox a = random_box();
    const PixelBox b = random_box();
    const double iou = BoxIou(a, b);
    EXPECT_EQ(iou, BoxIou(b, a));
    EXPECT_EQ(BoxIou(a, a), 1.0);
    EXPECT_GE(iou, 0.0);
    EXPECT_LE(iou, 1.0);
    const bool disjoint = a.x_max <= b.x_min || b.x_max <= a.x_min ||
                          a.y_max <= b.y_min || b.y_max <= a.y_min;
    EXPECT_EQ(iou == 0.0, disjoint);
  }
}

}  // namespace
}  // namespace groundkit
