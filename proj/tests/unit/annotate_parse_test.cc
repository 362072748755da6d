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

#include <string>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "groundkit/annotate/prompts.h"
#include "groundkit/annotate/record.h"
#include "groundkit/core/random.h"
#include "json.hpp"
#include "test_util.h"

namespace groundkit {
namespace {

using ::testing::HasSubstr;
using ::testing::Optional;
using testing::ReadTestdata;

TEST(AnnotationPromptTest, TemplateMatchesFixtureByteForByte) {
  EXPECT_EQ(kAnnotationPromptTemplate,
            ReadTestdata("annotation_prompt.template.txt"));
  EXPECT_EQ(kPointToBoxPromptTemplate,
            ReadTestdata("point_to_box_prompt.template.txt"));
}

TEST(AnnotationPromptTest, PickTwentyPerCameraGolden) {
  auto prompt = BuildAnnotationPrompt("pick", 20, 20, 20);
  ASSERT_TRUE(prompt.ok());
  EXPECT_EQ(*prompt, ReadTestdata("annotation_prompt.pick_20_20_20.golden.txt"));
  EXPECT_THAT(*prompt,
              HasSubstr("High-view camera (0-19), Left wrist camera (20-39)"));
}

TEST(AnnotationPromptTest, SingleFrameBoundary) {
  auto prompt = BuildAnnotationPrompt("place the cup on the tray", 1, 1, 1);
  ASSERT_TRUE(prompt.ok());
  EXPECT_EQ(*prompt, ReadTestdata("annotation_prompt.place_1_1_1.golden.txt"));
  EXPECT_THAT(*prompt,
              HasSubstr("High-view camera (0-0), Left wrist camera (1-1)"));
}

TEST(AnnotationPromptTest, Errors) {
  EXPECT_THAT(BuildAnnotationPrompt("", 20, 20, 20).status().message(),
              HasSubstr("task text required"));
  EXPECT_FALSE(BuildAnnotationPrompt("pick", 0, 20, 20).ok());
  EXPECT_FALSE(BuildAnnotationPrompt("pick", 20, 20, 0).ok());
}

TEST(AnnotationPromptTest, Deterministic) {
  EXPECT_EQ(*BuildAnnotationPrompt("pick", 7, 8, 9),
            *BuildAnnotationPrompt("pick", 7, 8, 9));
}

TEST(PointToBoxPromptTest, Golden) {
  auto prompt = BuildPointToBoxPrompt("pick up");
  ASSERT_TRUE(prompt.ok());
  EXPECT_EQ(*prompt, ReadTestdata("point_to_box_prompt.pick_up.golden.txt"));
  EXPECT_THAT(*prompt, HasSubstr("normalized to 0-1000. The values in box_2d "
                                 "must only be integers"));
}

TEST(PointToBoxPromptTest, BracesInTaskSurviveLiterally) {
  const std::string task = "pick {task} near {num_high} {";
  auto prompt = BuildPointToBoxPrompt(task);
  ASSERT_TRUE(prompt.ok());
  const std::string tmpl(kPointToBoxPromptTemplate);
  const size_t at = tmpl.find("{task}");
  ASSERT_NE(at, std::string::npos);
  // The output is the template with exactly one splice at the placeholder.
  EXPECT_EQ(*prompt, tmpl.substr(0, at) + task + tmpl.substr(at + 6));

  auto multi = BuildAnnotationPrompt("{num_high-1}", 3, 4, 5);
  ASSERT_TRUE(multi.ok());
  EXPECT_THAT(*multi, HasSubstr("Task description: {num_high-1}\n"));
  EXPECT_THAT(*multi, HasSubstr("(0-2)"));
}

TEST(PointToBoxPromptTest, EmptyTaskRejected) {
  EXPECT_FALSE(BuildPointToBoxPrompt("").ok());
}

TEST(ParseAnnotationTest, ExampleRecord) {
  auto rec = ParseAnnotationResponse(ReadTestdata("pick_example_record.json"));
  ASSERT_TRUE(rec.ok()) << rec.status();
  EXPECT_EQ(rec->task_type, TaskType::kPick);
  EXPECT_EQ(rec->arm_used, Arm::kLeft);
  EXPECT_EQ(rec->key_frame_index, 19);
  ASSERT_EQ(rec->bounding_boxes.size(), 1u);
  EXPECT_EQ(rec->bounding_boxes[0].box_2d, (ThousandBox{618, 411, 732, 457}));
  EXPECT_EQ(rec->bounding_boxes[0].label, "red object");
  EXPECT_THAT(rec->reasoning_step2, HasSubstr("Frame 30"));
  EXPECT_THAT(rec->verification, HasSubstr("matches the grasped object"));
}

TEST(ParseAnnotationTest, FencedParsesLikePlain) {
  const std::string plain = ReadTestdata("responses/pick_example.plain.txt");
  const std::string fenced = ReadTestdata("responses/pick_example.fenced.txt");
  ASSERT_NE(plain, fenced);
  auto a = ParseAnnotationResponse(plain);
  auto b = ParseAnnotationResponse(fenced);
  ASSERT_TRUE(a.ok()) << a.status();
  ASSERT_TRUE(b.ok()) << b.status();
  EXPECT_EQ(*a, *b);
}

std::string SchemaResponse(const std::string& box, const std::string& extra = "",
                           const std::string& task = "pick") {
  const std::string verification =
      task == "place" ? "container_verification" : "object_verification";
  return R"({"task_type": ")" + task +
         R"(", "arm_used": "right", "reasoning_step1": "a",
 "key_frame_index": 3, "reasoning_step2": "b",
 "bounding_boxes": [{"box_2d": )" +
         box + R"(, "label": "cup"}], "reasoning_step3": "c", ")" +
         verification + R"(": "d")" + extra + "}";
}

TEST(ParseAnnotationTest, InvertedBoxIsOrderingError) {
  auto rec = ParseAnnotationResponse(SchemaResponse("[732, 457, 618, 411]"));
  ASSERT_FALSE(rec.ok());
  EXPECT_THAT(rec.status().message(), HasSubstr("box ordering"));
}

struct BadCase {
  std::string name;
  std::string text;
  std::string tag;
};

TEST(ParseAnnotationTest, DistinctErrorTags) {
  const std::string ok = SchemaResponse("[100, 200, 300, 400]");
  ASSERT_TRUE(ParseAnnotationResponse(ok).ok());
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string s = ok;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  const std::vector<BadCase> cases = {
      {"prose only", "I could not find the object.", "no json object found"},
      {"task", replace("\"pick\"", "\"push\""), "unknown task_type"},
      {"arm", replace("\"right\"", "\"both\""), "unknown arm_used"},
      {"range", SchemaResponse("[100, 200, 300, 1001]"),
       "coordinate out of range"},
      {"negative", SchemaResponse("[-1, 200, 300, 400]"),
       "coordinate out of range"},
      {"float", SchemaResponse("[100.5, 200, 300, 400]"),
       "coordinate not integer"},
      {"float whole", SchemaResponse("[100.0, 200, 300, 400]"),
       "coordinate not integer"},
      {"string coord", SchemaResponse("[\"100\", 200, 300, 400]"),
       "coordinate not integer"},
      {"ordering", SchemaResponse("[300, 200, 300, 400]"), "box ordering"},
      {"missing arm", replace("\"arm_used\": \"right\",", ""),
       "missing field arm_used"},
      {"missing step3", replace("\"reasoning_step3\": \"c\",", ""),
       "missing field reasoning_step3"},
      {"missing verification", replace(", \"object_verification\": \"d\"", ""),
       "missing field object_verification"},
      {"wrong verification",
       replace("object_verification", "container_verification"),
       "verification mismatch"},
      {"no boxes", replace("[{\"box_2d\": [100, 200, 300, 400], \"label\": "
                           "\"cup\"}]",
                           "[]"),
       "no region returned"},
      {"negative key", replace("\"key_frame_index\": 3",
                               "\"key_frame_index\": -1"),
       "key_frame_index out of range"},
  };
  for (const BadCase& c : cases) {
    auto rec = ParseAnnotationResponse(c.text);
    ASSERT_FALSE(rec.ok()) << c.name;
    EXPECT_THAT(rec.status().message(), HasSubstr(c.tag)) << c.name;
    EXPECT_THAT(RawResponseOf(rec.status()), Optional(c.text)) << c.name;
  }
}

TEST(ParseAnnotationTest, KeyFrameBoundedByFrameCount) {
  const std::string text = SchemaResponse("[100, 200, 300, 400]");
  EXPECT_TRUE(ParseAnnotationResponse(text, 4).ok());
  auto rec = ParseAnnotationResponse(text, 3);
  ASSERT_FALSE(rec.ok());
  EXPECT_THAT(rec.status().message(), HasSubstr("key_frame_index out of range"));
}

TEST(ParseAnnotationTest, PlaceUsesContainerVerification) {
  auto rec = ParseAnnotationResponse(
      SchemaResponse("[100, 200, 300, 400]", "", "place"));
  ASSERT_TRUE(rec.ok()) << rec.status();
  EXPECT_EQ(rec->task_type, TaskType::kPlace);
  EXPECT_EQ(rec->verification, "d");
}

TEST(ParseAnnotationTest, InconsistentNormalizedBboxRejected) {
  std::string text = ReadTestdata("pick_example_record.json");
  text.replace(text.find("0.411"), 5, "0.511");
  auto rec = ParseAnnotationResponse(text);
  ASSERT_FALSE(rec.ok());
  EXPECT_THAT(rec.status().message(), HasSubstr("bbox inconsistent"));
}

TEST(ParseAnnotationTest, BracesInsideStringsDoNotConfuseExtraction) {
  const std::string text =
      std::string("Note: use {curly} braces.\n") +
      R"({"task_type": "pick", "arm_used": "left", "reasoning_step1": "a } {",
  "key_frame_index": 0, "reasoning_step2": "\"}\"",
  "bounding_boxes": [{"box_2d": [1, 2, 3, 4], "label": "x"}],
  "reasoning_step3": "c", "object_verification": "d"} trailing })";
  auto rec = ParseAnnotationResponse(text);
  ASSERT_TRUE(rec.ok()) << rec.status();
  EXPECT_EQ(rec->reasoning_step1, "a } {");
  EXPECT_EQ(rec->reasoning_step2, "\"}\"");
}

AnnotationRecord RandomRecord(Rng& rng) {
  AnnotationRecord r;
  r.task_type = UniformInt(rng, 0, 1) ? TaskType::kPlace : TaskType::kPick;
  r.arm_used = UniformInt(rng, 0, 1) ? Arm::kRight : Arm::kLeft;
  r.key_frame_index = static_cast<int>(UniformInt(rng, 0, 59));
  const int n = static_cast<int>(UniformInt(rng, 1, 4));
  for (int i = 0; i < n; ++i) {
    const int y0 = static_cast<int>(UniformInt(rng, 0, 999));
    const int x0 = static_cast<int>(UniformInt(rng, 0, 999));
    r.bounding_boxes.push_back(
        {ThousandBox{y0, x0, static_cast<int>(UniformInt(rng, y0 + 1, 1000)),
                     static_cast<int>(UniformInt(rng, x0 + 1, 1000))},
         "obj \"" + std::to_string(i) + "\" {x}"});
  }
  r.reasoning_step1 = "step one ✓ " + std::to_string(rng());
  r.reasoning_step2 = "line\nbreak";
  r.reasoning_step3 = "";
  r.verification = "verified \\ ok";
  return r;
}

TEST(ParseAnnotationTest, SerializeRoundTripProperty) {
  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    const AnnotationRecord rec = RandomRecord(rng);
    auto back = ParseAnnotationResponse(SerializeAnnotationRecord(rec));
    ASSERT_TRUE(back.ok()) << back.status();
    ASSERT_EQ(*back, rec);
  }
}

TEST(ParseAnnotationTest, SerializeUsesSchemaFieldOrder) {
  auto rec = ParseAnnotationResponse(ReadTestdata("pick_example_record.json"));
  ASSERT_TRUE(rec.ok());
  const std::string out = SerializeAnnotationRecord(*rec);
  std::vector<size_t> pos;
  for (const char* key :
       {"\"task_type\"", "\"arm_used\"", "\"reasoning_step1\"",
        "\"key_frame_index\"", "\"reasoning_step2\"", "\"bounding_boxes\"",
        "\"reasoning_step3\"", "\"object_verification\""}) {
    pos.push_back(out.find(key));
    ASSERT_NE(pos.back(), std::string::npos) << key;
  }
  EXPECT_TRUE(std::is_sorted(pos.begin(), pos.end()));
}

TEST(ParseBoxListTest, Variants) {
  auto one = ParseBoxListResponse(
      R"(```json
[{"box_2d": [100, 200, 300, 400], "label": "mug"}]
```)");
  ASSERT_TRUE(one.ok()) << one.status();
  ASSERT_EQ(one->size(), 1u);
  EXPECT_EQ((*one)[0].box_2d, (ThousandBox{100, 200, 300, 400}));

  auto bare = ParseBoxListResponse(
      R"({"box_2d": [100, 200, 300, 400], "label": "mug"})");
  ASSERT_TRUE(bare.ok()) << bare.status();
  EXPECT_EQ(bare->size(), 1u);

  auto empty = ParseBoxListResponse("[]");
  ASSERT_FALSE(empty.ok());
  EXPECT_THAT(empty.status().message(), HasSubstr("no region returned"));

  auto inverted =
      ParseBoxListResponse(R"([{"box_2d": [300, 200, 100, 400], "label": ""}])");
  ASSERT_FALSE(inverted.ok());
  EXPECT_THAT(inverted.status().message(), HasSubstr("box ordering"));
}

}  // namespace
}  // namespace groundkit
