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

#include "freshkit/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "freshkit/io.h"
#include "json.hpp"

namespace freshkit {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "freshkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("freshkit_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  fs::path dir_;
};

TEST_F(CliTest, McNemarFromCounts) {
  const auto r = Invoke({"mcnemar", "--n11", "788", "--n10", "35", "--n01", "8", "--n00", "12"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "mcnemar");
  EXPECT_NEAR(j["chi2"].get<double>(), 16.331, 1e-3);
  EXPECT_NEAR(j["p"].get<double>(), 5.32e-5, 1e-9);
  EXPECT_NEAR(j["delta"].get<double>(), 0.0320, 1e-4);
  EXPECT_NEAR(j["ci"][0].get<double>(), 0.0169, 1e-4);
  EXPECT_NEAR(j["ci"][1].get<double>(), 0.0471, 1e-4);
}

TEST_F(CliTest, EmptyLogitsIsMalformedInput) {
  const auto empty = Write("empty.csv", "");
  const auto r = Invoke({"score", "--method", "energy", "--logits", empty});
  EXPECT_EQ(r.code, kExitMalformedInput);
  EXPECT_NE(r.err.find("EmptyInput"), std::string::npos);
}

TEST_F(CliTest, HelpAndUsage) {
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
  const auto help = Invoke({"sweep", "--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE((help.out + help.err).find("--taus"), std::string::npos);
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"mcnemar", "--n11", "abc"}).code, kExitUsage);
}

TEST_F(CliTest, MissingClassIsNumericFailure) {
  const auto scores = Write("s.csv", "id,score,is_id\na,0.9,1\nb,0.8,1\n");
  const auto r = Invoke({"ood-eval", "--scores", scores});
  EXPECT_EQ(r.code, kExitNumeric);
  EXPECT_NE(r.err.find("MissingClass"), std::string::npos);
}

TEST_F(CliTest, SweepUsesDefaultTaus) {
  const auto scores = Write("s.csv", "id,score\na,0.3\nb,0.6\nc,0.9\n");
  const auto r = Invoke({"sweep", "--scores", scores});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["points"].size(), 9u);
  EXPECT_EQ(j["points"][4]["tau"], 0.5);
  EXPECT_TRUE(j["points"][4]["reference"].get<bool>());
  EXPECT_NEAR(j["points"][4]["coverage"].get<double>(), 0.666667, 1e-12);
}

TEST_F(CliTest, RepeatRunsAreByteIdentical) {
  const auto logits = Write("l.csv",
                            "id,split,label,logit_0,logit_1\n"
                            "a,test,0,2,0.5\nb,test,1,0.1,1.5\nc,test,1,1,0.9\n"
                            "d,ood,,0.2,0.1\ne,ood,,0.3,0.4\n");
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"ood-eval", "--logits", logits, "--method", "energy"},
        std::vector<std::string>{"cls-eval", "--logits", logits, "--class-names", "x,y",
                                 "--replicates", "200"},
        std::vector<std::string>{"score", "--logits", logits, "--method", "msp"}}) {
    const auto a = Invoke(args);
    const auto b = Invoke(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST_F(CliTest, OutFlagWritesFile) {
  const auto path = (dir_ / "report.json").string();
  const auto r = Invoke({"mcnemar", "--n11", "815", "--n10", "7", "--n01", "8", "--n00", "13",
                         "--out", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_NEAR(j["p"].get<double>(), 0.897, 1e-12);
}

TEST_F(CliTest, SplitAndFolds) {
  std::string labels = "id,label\n";
  for (int i = 0; i < 40; ++i) labels += "s" + std::to_string(i) + "," + std::to_string(i % 2) + "\n";
  const auto path = Write("labels.csv", labels);
  const auto split = Invoke({"split", "--labels", path});
  ASSERT_EQ(split.code, kExitOk) << split.err;
  const auto folds = Invoke({"folds", "--labels", path, "--seed", "3"});
  ASSERT_EQ(folds.code, kExitOk) << folds.err;
  EXPECT_TRUE(nlohmann::json::parse(folds.out)["leakage_audit_passed"].get<bool>());
}

TEST_F(CliTest, PseudomaskWritesMasks) {
  const auto in = dir_ / "in";
  const auto out = dir_ / "masks";
  fs::create_directories(in);
  RgbImage img(24, 20, Rgb{30, 30, 160});
  for (int y = 6; y < 14; ++y) {
    for (int x = 7; x < 17; ++x) img.set(x, y, Rgb{230, 210, 40});
  }
  WritePpm(in / "tray.ppm", img);
  const auto r = Invoke({"pseudomask", "--in", in.string(), "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(out / "tray.pgm"));
  const auto mask = ReadPgm(out / "tray.pgm");
  EXPECT_TRUE(mask.at(12, 10));
  EXPECT_FALSE(mask.at(1, 1));
}

}  // namespace
}  // namespace freshkit
