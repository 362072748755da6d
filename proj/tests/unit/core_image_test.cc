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

#include <cstdio>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <jpeglib.h>

#include "groundkit/core/image.h"
#include "groundkit/core/image_io.h"
#include "groundkit/core/random.h"

namespace groundkit {
namespace {

using ::testing::HasSubstr;

ImageBuffer RandomImage(Rng& rng, int w, int h) {
  ImageBuffer img(w, h);
  for (auto& v : img.mutable_pixels()) {
    v = static_cast<uint8_t>(UniformInt(rng, 0, 255));
  }
  return img;
}

TEST(ImageBufferTest, FromPixelsChecksSize) {
  EXPECT_FALSE(ImageBuffer::FromPixels(2, 2, std::vector<uint8_t>(11)).ok());
  EXPECT_FALSE(ImageBuffer::FromPixels(0, 2, {}).ok());
  auto img = ImageBuffer::FromPixels(2, 2, std::vector<uint8_t>(12, 7));
  ASSERT_TRUE(img.ok());
  EXPECT_EQ(img->At(1, 1), (Rgb{7, 7, 7}));
}

TEST(ImageBufferTest, CountChangedPixels) {
  ImageBuffer a(4, 3);
  ImageBuffer b = a;
  b.Set(0, 0, {1, 0, 0});
  b.Set(3, 2, {0, 0, 1});
  EXPECT_EQ(CountChangedPixels(a, b), 2);
}

TEST(ImageIoTest, PngRoundTripIsLossless) {
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    const ImageBuffer img = RandomImage(rng, 17 + i, 9 + 2 * i);
    const std::string png = EncodePng(img);
    EXPECT_EQ(DetectImageFormat(png), ImageFormat::kPng);
    auto decoded = DecodeImage(png);
    ASSERT_TRUE(decoded.ok()) << decoded.status();
    EXPECT_EQ(*decoded, img);
    // Encoding is deterministic.
    EXPECT_EQ(EncodePng(img), png);
  }
}

TEST(ImageIoTest, RejectsGarbage) {
  auto r = DecodeImage("definitely not an image");
  ASSERT_FALSE(r.ok());
  EXPECT_THAT(r.status().message(), HasSubstr("unreadable image"));
  std::string truncated = EncodePng(ImageBuffer(8, 8, {1, 2, 3}));
  truncated.resize(truncated.size() / 2);
  EXPECT_FALSE(DecodeImage(truncated).ok());
}

std::string EncodeGrayJpeg(int w, int h, uint8_t value) {
  jpeg_compress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = w;
  cinfo.image_height = h;
  cinfo.input_components = 1;
  cinfo.in_color_space = JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, 100, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  std::vector<uint8_t> row(w, value);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW r = row.data();
    jpeg_write_scanlines(&cinfo, &r, 1);
  }
  jpeg_finish_compress(&cinfo);
  std::string out(reinterpret_cast<char*>(buffer), size);
  jpeg_destroy_compress(&cinfo);
  free(buffer);
  return out;
}

TEST(ImageIoTest, GrayJpegIsConvertedToRgb) {
  const std::string jpeg = EncodeGrayJpeg(16, 8, 128);
  EXPECT_EQ(DetectImageFormat(jpeg), ImageFormat::kJpeg);
  auto img = DecodeImage(jpeg);
  ASSERT_TRUE(img.ok()) << img.status();
  EXPECT_EQ(img->width(), 16);
  EXPECT_EQ(img->height(), 8);
  const Rgb c = img->At(5, 5);
  EXPECT_EQ(c.r, c.g);
  EXPECT_EQ(c.g, c.b);
  EXPECT_NEAR(c.r, 128, 1);
}

TEST(ImageTest, ResizeNearestAndHash) {
  ImageBuffer src(2, 2);
  src.Set(1, 0, {255, 255, 255});
  const ImageBuffer big = ResizeNearest(src, 4, 4);
  EXPECT_EQ(big.At(3, 1), (Rgb{255, 255, 255}));
  EXPECT_EQ(big.At(1, 1), (Rgb{0, 0, 0}));
  EXPECT_EQ(ContentHash(src), ContentHash(ImageBuffer(src)));
  EXPECT_NE(ContentHash(src), ContentHash(big));
  EXPECT_EQ(ContentHash(src).size(), 64u);
}

TEST(RandomTest, UniformIntStaysInRangeAndCoversIt) {
  Rng rng(5);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const int64_t v = UniformInt(rng, -3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    ++hits[v + 3];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(RandomTest, SampleWithoutReplacementIsDistinct) {
  Rng rng(6);
  auto s = SampleWithoutReplacement(rng, 100, 50);
  std::sort(s.begin(), s.end());
  EXPECT_EQ(std::unique(s.begin(), s.end()), s.end());
  EXPECT_LT(s.back(), 100u);
}

TEST(RandomTest, DeriveSeedDependsOnKeyAndIndex) {
  EXPECT_EQ(DeriveSeed(1, "a", 2), DeriveSeed(1, "a", 2));
  EXPECT_NE(DeriveSeed(1, "a", 2), DeriveSeed(1, "a", 3));
  EXPECT_NE(DeriveSeed(1, "a", 2), DeriveSeed(1, "b", 2));
  EXPECT_NE(DeriveSeed(1, "a", 2), DeriveSeed(2, "a", 2));
}

}  // namespace
}  // namespace groundkit
