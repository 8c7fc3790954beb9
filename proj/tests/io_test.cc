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

#include "freshkit/io.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "freshkit/error.h"

namespace freshkit {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

std::vector<LogitRecord> Parse(const std::string& text) {
  std::istringstream in(text);
  return ReadLogitCsv(in);
}

constexpr char kHeader[] = "id,split,label,logit_0,logit_1,logit_2,logit_3\n";

TEST(LogitCsvTest, MapsFieldsDirectly) {
  const auto rows = Parse(std::string(kHeader) + "a,test,2,0.1,0.2,0.3,0.4\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].id, "a");
  EXPECT_EQ(rows[0].split, Split::kTest);
  EXPECT_EQ(rows[0].label, 2);
  EXPECT_EQ(rows[0].logits, (std::vector<double>{0.1, 0.2, 0.3, 0.4}));
}

TEST(LogitCsvTest, EmptyLabelIsAbsent) {
  const auto rows = Parse(std::string(kHeader) + "b,ood,,1,1,1,1\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].label.has_value());
  EXPECT_EQ(rows[0].split, Split::kOod);
}

TEST(LogitCsvTest, RejectsOutOfRangeLabel) {
  try {
    Parse(std::string(kHeader) + "a,test,1,0,0,0,0\nc,test,9,0,0,0,0\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadLabelIndex);
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(LogitCsvTest, RejectsMalformedInput) {
  EXPECT_EQ(CodeOf([] { Parse(""); }), ErrorCode::kEmptyInput);
  EXPECT_EQ(CodeOf([] { Parse("id,split,logit_0\n"); }), ErrorCode::kMalformedHeader);
  EXPECT_EQ(CodeOf([] { Parse("id,split,label,logit_1\n"); }), ErrorCode::kMalformedHeader);
  EXPECT_EQ(CodeOf([] { Parse(std::string(kHeader) + "a,test,1,0,0,0\n"); }),
            ErrorCode::kInconsistentWidth);
  EXPECT_EQ(CodeOf([] { Parse(std::string(kHeader) + "a,test,1,0,nan,0,0\n"); }),
            ErrorCode::kNonFiniteLogit);
  EXPECT_EQ(CodeOf([] { Parse(std::string(kHeader) + "a,test,1,0,inf,0,0\n"); }),
            ErrorCode::kNonFiniteLogit);
  EXPECT_EQ(CodeOf([] { Parse(std::string(kHeader) + "a,test,1,0,x,0,0\n"); }),
            ErrorCode::kMalformedRow);
  EXPECT_EQ(CodeOf([] { Parse(std::string(kHeader) + "a,dev,1,0,0,0,0\n"); }),
            ErrorCode::kMalformedRow);
  EXPECT_EQ(CodeOf([] { Parse(std::string(kHeader) + "a,ood,1,0,0,0,0\n"); }),
            ErrorCode::kBadLabelIndex);
}

TEST(LogitCsvTest, HeaderOnlyGivesNoRows) {
  EXPECT_TRUE(Parse(kHeader).empty());
}

TEST(LogitCsvTest, RoundTripIsFieldForField) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 5.0);
  std::vector<LogitRecord> records;
  const Split splits[] = {Split::kTrain, Split::kVal, Split::kTest, Split::kOod};
  for (int i = 0; i < 200; ++i) {
    LogitRecord r;
    r.id = "img_" + std::to_string(i);
    r.split = splits[i % 4];
    if (r.split != Split::kOod) r.label = i % 3;
    for (int c = 0; c < 3; ++c) r.logits.push_back(normal(rng));
    records.push_back(std::move(r));
  }
  std::ostringstream out;
  WriteLogitCsv(out, records);
  EXPECT_EQ(Parse(out.str()), records);
}

TEST(PgmTest, ThresholdConvention) {
  std::string data = "P5\n2 1\n255\n";
  data += static_cast<char>(255);
  data += static_cast<char>(0);
  std::istringstream in(data);
  const auto mask = ReadPgm(in);
  EXPECT_TRUE(mask.at(0, 0));
  EXPECT_FALSE(mask.at(1, 0));
}

TEST(PgmTest, RoundTripIsByteIdentical) {
  BinaryMask mask(5, 3);
  for (size_t i = 0; i < mask.size(); i += 2) mask.set_index(i, true);
  std::ostringstream first;
  WritePgm(first, mask);
  std::istringstream in(first.str());
  const auto again = ReadPgm(in);
  EXPECT_EQ(again, mask);
  std::ostringstream second;
  WritePgm(second, again);
  EXPECT_EQ(first.str(), second.str());
}

TEST(PgmTest, HeaderCommentsAreSkipped) {
  std::string data = "P5\n# made by hand\n1 1\n255\n";
  data += static_cast<char>(200);
  std::istringstream in(data);
  EXPECT_TRUE(ReadPgm(in).at(0, 0));
}

TEST(NetpbmTest, RejectsBadInput) {
  EXPECT_EQ(CodeOf([] {
              std::istringstream in("P2\n1 1\n255\n0");
              ReadPgm(in);
            }),
            ErrorCode::kBadMagic);
  EXPECT_EQ(CodeOf([] {
              std::istringstream in("P6\n1 1\n65535\n");
              ReadPpm(in);
            }),
            ErrorCode::kUnsupportedMaxval);
  EXPECT_EQ(CodeOf([] {
              std::istringstream in("P6\n2 2\n255\nabc");
              ReadPpm(in);
            }),
            ErrorCode::kTruncatedPayload);
}

TEST(PpmTest, RoundTrip) {
  RgbImage img(3, 2);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 3; ++x) {
      img.set(x, y, Rgb{static_cast<uint8_t>(x * 40), static_cast<uint8_t>(y * 90), 7});
    }
  }
  std::ostringstream out;
  WritePpm(out, img);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadPpm(in), img);
}

TEST(PgmTest, GrayscaleReaderReplicatesChannels) {
  std::string data = "P5\n2 1\n255\n";
  data += static_cast<char>(10);
  data += static_cast<char>(250);
  std::istringstream in(data);
  const auto img = ReadGrayPgm(in);
  EXPECT_EQ(img.at(0, 0), (Rgb{10, 10, 10}));
  EXPECT_EQ(img.at(1, 0), (Rgb{250, 250, 250}));
}

class IoFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("freshkit_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path Write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
  std::filesystem::path dir_;
};

TEST_F(IoFileTest, ZeroByteFileIsEmptyInput) {
  const auto p = Write("empty.csv", "");
  EXPECT_EQ(CodeOf([&] { ReadLogitCsv(p); }), ErrorCode::kEmptyInput);
}

TEST_F(IoFileTest, MissingFileIsIoError) {
  EXPECT_EQ(CodeOf([&] { ReadLogitCsv(dir_ / "nope.csv"); }), ErrorCode::kIoError);
}

TEST_F(IoFileTest, ScoresCsvWithAndWithoutIsId) {
  const auto with = ReadScoresCsv(Write("a.csv", "id,score,is_id\nx,0.5,1\ny,0.25,0\n"));
  ASSERT_EQ(with.size(), 2u);
  EXPECT_EQ(with[0].is_id, true);
  EXPECT_EQ(with[1].is_id, false);
  const auto without = ReadScoresCsv(Write("b.csv", "id,score\nx,0.5\n"));
  EXPECT_FALSE(without[0].is_id.has_value());
  EXPECT_EQ(CodeOf([&] { ReadScoresCsv(Write("c.csv", "id,score,is_id\nx,0.5,2\n")); }),
            ErrorCode::kMalformedRow);
}

TEST_F(IoFileTest, FeaturesRoundTrip) {
  std::vector<FeatureRow> rows = {{"a", 1, {0.5, -2.0}}, {"b", std::nullopt, {1e-9, 3.0}}};
  WriteFeaturesCsv(dir_ / "f.csv", rows);
  const auto back = ReadFeaturesCsv(dir_ / "f.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].label, 1);
  EXPECT_FALSE(back[1].label.has_value());
  EXPECT_EQ(back[1].features, rows[1].features);
}

TEST_F(IoFileTest, LabelsCsv) {
  const auto rows = ReadLabelsCsv(Write("l.csv", "id,label\na,0\nb,3\n"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].label, 3);
  EXPECT_EQ(CodeOf([&] { ReadLabelsCsv(Write("m.csv", "id,label\na,-1\n")); }),
            ErrorCode::kBadLabelIndex);
}

}  // namespace
}  // namespace freshkit
