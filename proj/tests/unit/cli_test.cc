// Copyright 2026 The conffuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <filesystem>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace conffuzz {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;
using testing::CommandResult;

CommandResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), CONFFUZZ_CLI);
  return testing::RunCommand(args);
}

std::string Src(std::string_view relative) {
  return testing::SourcePath(relative).string();
}

TEST(CliTest, GrammarCheck) {
  const CommandResult ok = Cli({"grammar-check", Src("grammars/gnb.json")});
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_EQ(ok.out, "tokens: 27\nrules: 94\n");

  testing::TempDir dir;
  testing::WriteFileOrDie(dir / "bad.json", R"({"<START>": [["<GONE>"]]})");
  EXPECT_EQ(Cli({"grammar-check", (dir / "bad.json").string(), "--strict"})
                .exit_code,
            1);
  EXPECT_EQ(Cli({"grammar-check", (dir / "bad.json").string()}).exit_code, 0);
  EXPECT_EQ(Cli({"grammar-check", "/nonexistent.json"}).exit_code, 1);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({}).exit_code, 1);
  EXPECT_EQ(Cli({"no-such-command"}).exit_code, 1);
  EXPECT_EQ(Cli({"fuzz"}).exit_code, 1);
  EXPECT_EQ(Cli({"--help"}).exit_code, 0);
}

TEST(CliTest, GenIsDeterministic) {
  testing::TempDir a;
  testing::TempDir b;
  for (const auto* dir : {&a, &b}) {
    ASSERT_EQ(Cli({"gen", "--grammar", Src("grammars/gnb.json"), "--seed", "5",
                   "--count", "3", "--out", dir->path().string()})
                  .exit_code,
              0);
  }
  for (int k = 0; k < 3; ++k) {
    const std::string name = "gen-" + std::to_string(k) + ".conf";
    EXPECT_EQ(testing::ReadFileOrDie(a / name), testing::ReadFileOrDie(b / name));
  }
}

TEST(CliTest, ValidateExitCodes) {
  const CommandResult ok = Cli({"validate", Src("fixtures/table1/initial.conf")});
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_EQ(ok.out, "ok 0\n");

  const CommandResult crash =
      Cli({"validate", Src("fixtures/table1/case5.conf")});
  EXPECT_EQ(crash.exit_code, 3);
  EXPECT_THAT(crash.out, StartsWith("crash 104 "));

  testing::TempDir dir;
  testing::WriteFileOrDie(dir / "garbage.conf", "((( not a config");
  EXPECT_EQ(Cli({"validate", (dir / "garbage.conf").string()}).exit_code, 2);
  EXPECT_EQ(Cli({"validate", (dir / "absent.conf").string()}).exit_code, 1);
}

TEST(CliTest, ValidateThroughStandaloneValidator) {
  const CommandResult r =
      Cli({"validate", Src("fixtures/table1/case1.conf"), "--target",
           std::string("exec:") + CONFFUZZ_GNB_VALIDATOR + " {input}"});
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_THAT(r.out, StartsWith("crash 6 "));
}

TEST(CliTest, FuzzSmokeRun) {
  testing::TempDir dir;
  const CommandResult r =
      Cli({"fuzz", "--grammar", Src("grammars/gnb.json"), "--seed", "1",
           "--max-execs", "3000", "--out", dir.path().string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto stats =
      nlohmann::json::parse(testing::ReadFileOrDie(dir / "stats.json"));
  EXPECT_EQ(stats["execs"], 3000);
  EXPECT_EQ(stats["seed"], 1);
  size_t keys = 0;
  for (size_t pos = 0; (pos = r.out.find('\n', pos)) != std::string::npos;
       ++pos) {
    ++keys;
  }
  EXPECT_EQ(keys, stats["crashes_unique"].get<size_t>());
  EXPECT_EQ(Cli({"fuzz", "--grammar", Src("grammars/gnb.json"), "--weights",
                 "0", "0", "0", "0", "--max-execs", "10", "--out",
                 (dir / "w").string()})
                .exit_code,
            1);
}

TEST(CliTest, MinimizeAndTriage) {
  testing::TempDir dir;
  const CommandResult min = Cli(
      {"minimize", "--grammar", Src("grammars/gnb.json"), "--input",
       Src("fixtures/table1/case5.conf"), "--out", (dir / "min.conf").string()});
  ASSERT_EQ(min.exit_code, 0) << min.err;
  EXPECT_THAT(min.err, HasSubstr("dedup_key="));
  const CommandResult replay = Cli({"validate", (dir / "min.conf").string()});
  EXPECT_EQ(replay.exit_code, 3);
  EXPECT_THAT(replay.out, StartsWith("crash 104 "));

  std::vector<std::string> args = {"triage"};
  for (const char* c : {"case1", "case2", "case3", "case4", "case5"}) {
    args.push_back("--input");
    args.push_back(Src(std::string("fixtures/table1/") + c + ".conf"));
  }
  const CommandResult table = Cli(args);
  ASSERT_EQ(table.exit_code, 0) << table.err;
  EXPECT_THAT(table.out, StartsWith("parameter "));
  EXPECT_EQ(std::count(table.out.begin(), table.out.end(), '\n'), 9);
  EXPECT_EQ(Cli({"triage"}).exit_code, 1);
}

TEST(CliTest, ExplainWithGlossary) {
  testing::TempDir dir;
  const CommandResult r = Cli(
      {"explain", "--input", Src("fixtures/explain/pbch.log"), "--src",
       Src("fixtures/explain/src"), "--backend",
       "glossary:" + Src("fixtures/explain/glossary.tsv"), "--out",
       (dir / "report.txt").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(testing::ReadFileOrDie(dir / "report.txt"),
            testing::ReadFileOrDie(
                testing::SourcePath("fixtures/explain/expected_report.txt")));
}

TEST(CliTest, ExplainBackendFailureIsPartial) {
  // Nothing listens on port 9 of the loopback interface.
  const CommandResult r = Cli(
      {"explain", "--input", Src("fixtures/explain/pbch.log"), "--src",
       Src("fixtures/explain/src"), "--backend", "http://127.0.0.1:9/x"});
  EXPECT_EQ(r.exit_code, 4);
  EXPECT_THAT(r.out, StartsWith("[tests] 7\n"));
  EXPECT_THAT(r.out, HasSubstr("[partial] "));
}

TEST(CliTest, MakeFixturesMatchesCommittedFiles) {
  testing::TempDir dir;
  ASSERT_EQ(Cli({"make-fixtures", "--out", dir.path().string()}).exit_code, 0);
  for (const char* name :
       {"initial", "case1", "case2", "case3", "case4", "case5"}) {
    const std::string file = std::string(name) + ".conf";
    EXPECT_EQ(testing::ReadFileOrDie(dir / file),
              testing::ReadFileOrDie(
                  testing::SourcePath("fixtures/table1/" + file)));
  }
}

}  // namespace
}  // namespace conffuzz
