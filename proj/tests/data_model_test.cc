/*
 * Copyright 2026 The freshkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "freshkit/data_model.h"

#include <gtest/gtest.h>

#include "freshkit/error.h"

namespace freshkit {
namespace {

TEST(ClassSpaceTest, DefaultHasFourFreshnessClasses) {
  const ClassSpace space;
  ASSERT_EQ(space.size(), 4);
  EXPECT_EQ(space.name(0), "PackagedFresh");
  EXPECT_EQ(space.name(1), "PackagedSpoiled");
  EXPECT_EQ(space.name(2), "UnpackagedFresh");
  EXPECT_EQ(space.name(3), "UnpackagedSpoiled");
}

TEST(ClassSpaceTest, RejectsDuplicateAndEmptyNames) {
  EXPECT_THROW(ClassSpace({"a", "a"}), Error);
  EXPECT_THROW(ClassSpace({"a", ""}), Error);
  EXPECT_THROW(ClassSpace(std::vector<std::string>{}), Error);
}

TEST(ClassSpaceTest, GenericNames) {
  const auto space = ClassSpace::Generic(3);
  EXPECT_EQ(space.names(), (std::vector<std::string>{"class_0", "class_1", "class_2"}));
}

TEST(SplitTest, NamesRoundTrip) {
  for (auto s : {Split::kTrain, Split::kVal, Split::kTest, Split::kOod}) {
    EXPECT_EQ(ParseSplit(SplitName(s)), s);
  }
  EXPECT_FALSE(ParseSplit("holdout").has_value());
}

TEST(BinaryMaskTest, CountsForeground) {
  BinaryMask m(3, 2);
  EXPECT_EQ(m.count(), 0u);
  m.set(2, 1, true);
  m.set(0, 0, true);
  EXPECT_EQ(m.count(), 2u);
  EXPECT_TRUE(m[5]);
  EXPECT_TRUE(m.at(0, 0));
}

TEST(RgbImageTest, FillAndAccess) {
  RgbImage img(2, 2, Rgb{1, 2, 3});
  EXPECT_EQ(img.bytes().size(), 12u);
  img.set(1, 1, Rgb{9, 8, 7});
  EXPECT_EQ(img.at(1, 1), (Rgb{9, 8, 7}));
  EXPECT_EQ(img.at(0, 1), (Rgb{1, 2, 3}));
}

TEST(ErrorTest, CategoriesMapToExitGroups) {
  EXPECT_EQ(CategoryOf(ErrorCode::kInvalidArgument), ErrorCategory::kUsage);
  EXPECT_EQ(CategoryOf(ErrorCode::kEmptyInput), ErrorCategory::kMalformedInput);
  EXPECT_EQ(CategoryOf(ErrorCode::kBadLabelIndex), ErrorCategory::kMalformedInput);
  EXPECT_EQ(CategoryOf(ErrorCode::kMissingClass), ErrorCategory::kNumeric);
  EXPECT_EQ(CategoryOf(ErrorCode::kDegenerateGraph), ErrorCategory::kNumeric);
}

TEST(ErrorTest, MessageCarriesCodeAndRow) {
  const Error e(ErrorCode::kBadLabelIndex, "label 9", 3);
  EXPECT_EQ(e.code(), ErrorCode::kBadLabelIndex);
  EXPECT_EQ(e.row(), 3u);
  EXPECT_NE(std::string(e.what()).find("BadLabelIndex"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos);
}

TEST(PairedOutcomeTest, Total) {
  EXPECT_EQ((PairedOutcome{788, 35, 8, 12}.total()), 843);
}

}  // namespace
}  // namespace freshkit
