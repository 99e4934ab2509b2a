// Copyright 2026 The clansim Authors
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

#include "clansim/model_io.h"

#include <gtest/gtest.h>

#include <random>

#include "clansim/error.h"
#include "fixtures.h"

namespace clansim {
namespace {

ErrorCode CodeOf(const std::string& text) {
  try {
    ParseModelJson(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;  // parse unexpectedly succeeded
}

std::string MessageOf(const std::string& text) {
  try {
    ParseModelJson(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(ModelIoTest, ParsesFixtures) {
  const auto m1 = ParseModel(testing::FixturePath("m1.json"));
  const auto m2 = ParseModel(testing::FixturePath("m2.json"));
  const auto m3 = ParseModel(testing::FixturePath("m3.json"));
  EXPECT_EQ(m1.neuron_specs(), testing::M1().neuron_specs());
  EXPECT_EQ(m2.neuron_specs(), testing::M2().neuron_specs());
  EXPECT_EQ(m3.neuron_specs(), testing::M3().neuron_specs());
  EXPECT_DOUBLE_EQ(BigLambda(m2, 2), 10.5);
  EXPECT_EQ(m2.pre(2, 1), std::vector<NeuronId>({1}));
}

TEST(ModelIoTest, ParsesFeedforward) {
  const auto model = ParseModelJson(
      R"({"type":"decaying_feedforward","a0":1,"r":0.1,"s":[1,1],"window":[1]})");
  EXPECT_FALSE(model.is_finite());
  EXPECT_TRUE(CheckConditions(model, DefaultScope(model)).passes);
  const auto same = ParseModel(testing::FixturePath("feedforward.json"));
  EXPECT_EQ(*same.family(), *model.family());
}

TEST(ModelIoTest, SchemaErrors) {
  EXPECT_EQ(CodeOf(R"({"type":"finite","neurons":[{"id":1}]})"), ErrorCode::kSchemaError);
  EXPECT_NE(MessageOf(R"({"type":"finite","neurons":[{"id":1}]})").find("rates"),
            std::string::npos);
  EXPECT_EQ(CodeOf(R"({"type":"finite","neurons":[{"id":1,"rates":[1,1],"colour":2}]})"),
            ErrorCode::kSchemaError);
  EXPECT_EQ(CodeOf(R"({"type":"finite","neurons":[],"extra":1})"), ErrorCode::kSchemaError);
  EXPECT_EQ(CodeOf(R"({"type":"lattice"})"), ErrorCode::kSchemaError);
  EXPECT_EQ(CodeOf(R"({"type":"finite","neurons":[{"id":1,"rates":[1,1],"post":{"0":[1]}}]})"),
            ErrorCode::kSchemaError);
  EXPECT_EQ(
      CodeOf(R"({"type":"finite","neurons":[{"id":1,"rates":[1,1],"post":{"1":[5]}}]})"),
      ErrorCode::kSchemaError);
  EXPECT_EQ(CodeOf(R"({"type":"finite","neurons":[{"id":-1,"rates":[1,1]}]})"),
            ErrorCode::kSchemaError);
  EXPECT_EQ(CodeOf(R"({"type":"finite","neurons":[{"id":1,"rates":["a"]}]})"),
            ErrorCode::kSchemaError);
  EXPECT_EQ(CodeOf(R"({"type":"finite","neurons":[{"id":1,"rates":[1]},{"id":1,"rates":[1]}]})"),
            ErrorCode::kSchemaError);
  EXPECT_EQ(CodeOf(R"({"type":"decaying_feedforward","a0":1,"r":2,"s":[1,1],"window":[1]})"),
            ErrorCode::kSchemaError);
  EXPECT_EQ(CodeOf(R"({"type":"decaying_feedforward","a0":1,"r":0.5,"s":[1,1]})"),
            ErrorCode::kSchemaError);
}

TEST(ModelIoTest, SyntaxErrorReportsLine) {
  const std::string text = "{\n  \"type\": \"finite\",\n  \"neurons\": [,]\n}";
  EXPECT_EQ(CodeOf(text), ErrorCode::kSchemaError);
  EXPECT_NE(MessageOf(text).find("line 3"), std::string::npos) << MessageOf(text);
}

TEST(ModelIoTest, MissingFileIsIoError) {
  try {
    ParseModel("/nonexistent/model.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(ModelIoTest, CanonicalSerialization) {
  EXPECT_EQ(SerializeModel(testing::M2()),
            R"({"neurons":[{"id":1,"post":{"1":[2]},"rates":[1,0.5]},)"
            R"({"id":2,"post":{},"rates":[9,1]}],"type":"finite"})");
}

TEST(ModelIoTest, RoundTripRandomModels) {
  std::mt19937_64 gen(50);
  for (int trial = 0; trial < 100; ++trial) {
    const auto model = testing::RandomModel(gen, 1 + trial % 7, 1 + trial % 4, 0.3);
    const std::string text = SerializeModel(model);
    const auto back = ParseModelJson(text);
    ASSERT_EQ(back.neuron_specs(), model.neuron_specs());
    ASSERT_EQ(SerializeModel(back), text);
    ASSERT_EQ(ModelDigest(back), ModelDigest(model));
  }
  const auto ff = BuildDecayingFeedforward({1.0, 0.1, {1, 1}, {1}});
  EXPECT_EQ(*ParseModelJson(SerializeModel(ff)).family(), *ff.family());
}

TEST(ModelIoTest, DigestSeparatesModels) {
  EXPECT_NE(ModelDigest(testing::M1()), ModelDigest(testing::M2()));
  EXPECT_EQ(ModelDigest(testing::M3()).size(), 16u);
}

}  // namespace
}  // namespace clansim
