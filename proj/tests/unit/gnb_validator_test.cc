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

#include "core/gnb_validator.h"

#include <set>

#include "core/grammar.h"
#include "core/table1.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace conffuzz {
namespace {

using ::testing::Contains;

// Reference classification written from the rule list, not from the
// validator source: returns 0 for Ok, -1 for Reject, else the crash id.
int ReferenceVerdict(const std::array<int64_t, 8>& v) {
  const auto [csirs, srs, coreset, ss0, ssb, band, point_a, bw] = v;
  if (csirs < 0 || csirs > 1 || srs < 0 || srs > 1) return -1;
  if (coreset < 0 || coreset > 15 || ss0 < 0 || ss0 > 15) return -1;
  int64_t lo = 0, hi = 0;
  bool known = true;
  if (band == 41) {
    lo = 499200;
    hi = 537999;
  } else if (band == 78) {
    lo = 620000;
    hi = 653333;
  } else {
    known = false;
  }
  if (known) {
    if (ssb < lo || ssb > hi) return 101;
    if (point_a < lo || point_a > hi) return 102;
    if (bw < 25) return 103;
  } else {
    return 104;
  }
  if (coreset >= 13 && coreset <= 15) return 105;
  return 0;
}

int Verdict(const ExecResult& r) {
  switch (r.outcome.cls) {
    case OutcomeClass::kOk:
      return 0;
    case OutcomeClass::kReject:
      return -1;
    default:
      return r.outcome.code;
  }
}

TEST(GnbValidatorTest, ReferenceCaseCalibration) {
  const std::array<int, 6> expected = {0, 101, 102, 101, 102, 104};
  for (size_t i = 0; i < table1::Columns().size(); ++i) {
    const ExecResult r = ValidateGnb(table1::ColumnDocument(i));
    EXPECT_EQ(Verdict(r), expected[i]) << table1::Columns()[i].name;
    EXPECT_EQ(Verdict(r), ReferenceVerdict(table1::Columns()[i].values));
  }
}

TEST(GnbValidatorTest, DomainRejects) {
  const ParamPath csirs = table1::WatchPaths()[0];
  const ExecResult r =
      ValidateGnb(SetParam(table1::InitialDocument(), csirs, Scalar::Int(2)));
  EXPECT_EQ(r.outcome.cls, OutcomeClass::kReject);
  EXPECT_EQ(r.outcome.code, kGnbRejectCode);
  EXPECT_THAT(r.feedback.branches, Contains("chk:do_CSIRS:invalid"));

  const ExecResult missing = ValidateGnb(ParseConfig("gNBs = ();"));
  EXPECT_EQ(missing.outcome.cls, OutcomeClass::kReject);

  const ExecResult not_int = ValidateGnb(SetParam(
      table1::InitialDocument(), table1::WatchPaths()[7], Scalar::Str("x")));
  EXPECT_EQ(not_int.outcome.cls, OutcomeClass::kReject);

  const ExecResult garbage = ValidateGnbText("this is not a config");
  EXPECT_EQ(garbage.outcome.cls, OutcomeClass::kReject);
  EXPECT_THAT(garbage.feedback.branches, Contains("parse:SyntaxError"));
}

TEST(GnbValidatorTest, BandTable) {
  ASSERT_EQ(BandTable().size(), 2);
  EXPECT_TRUE(FindBand(78).has_value());
  EXPECT_EQ(FindBand(41)->arfcn_lo, 499200);
  EXPECT_FALSE(FindBand(257).has_value());
  for (size_t i = 1; i < BandTable().size(); ++i) {
    EXPECT_LT(BandTable()[i - 1].band, BandTable()[i].band);
  }
}

TEST(GnbValidatorTest, PurityAndBranchShape) {
  const ExecResult a = ValidateGnb(table1::InitialDocument());
  const ExecResult b = ValidateGnb(table1::InitialDocument());
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.feedback, b.feedback);
  for (const std::string& branch : a.feedback.branches) {
    EXPECT_TRUE(branch.starts_with("chk:")) << branch;
  }
}

// Every generated configuration agrees with the reference rules, and every
// crash id is reachable from the shipped grammar.
TEST(GnbValidatorTest, AgreesWithReferenceOnGeneratedInputs) {
  const Grammar g =
      Grammar::Load(testing::SourcePath("grammars/gnb.json"), true);
  std::set<int> ids;
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    const ConfigDocument doc = ParseConfig(Unparse(GenerateTree(g, seed, 64), g));
    std::array<int64_t, 8> v{};
    for (size_t i = 0; i < 8; ++i) {
      v[i] = GetParam(doc, table1::WatchPaths()[i]).as_int();
    }
    const int verdict = Verdict(ValidateGnb(doc));
    ASSERT_EQ(verdict, ReferenceVerdict(v)) << "seed " << seed;
    if (verdict > 0) ids.insert(verdict);
  }
  EXPECT_EQ(ids, (std::set<int>{101, 102, 103, 104, 105}));
}

TEST(GnbValidatorTest, WitnessesForEveryCrashId) {
  const ConfigDocument base = table1::InitialDocument();
  const auto& paths = table1::WatchPaths();
  auto with = [&](std::initializer_list<std::pair<size_t, int64_t>> edits) {
    ConfigDocument doc = base;
    for (auto [i, v] : edits) doc = SetParam(doc, paths[i], Scalar::Int(v));
    return Verdict(ValidateGnb(doc));
  };
  EXPECT_EQ(with({{4, 653334}}), 101);
  EXPECT_EQ(with({{6, 660000}}), 102);
  EXPECT_EQ(with({{7, 24}}), 103);
  EXPECT_EQ(with({{5, 77}}), 104);
  EXPECT_EQ(with({{2, 13}}), 105);
  EXPECT_EQ(with({{2, 16}}), -1);
  EXPECT_EQ(with({{3, 16}}), -1);
  EXPECT_EQ(with({{5, 41}, {4, 520000}, {6, 520000}}), 0);
}

TEST(GnbValidatorTest, StandaloneExecutable) {
  testing::TempDir dir;
  const auto run = [&](size_t column) {
    const auto path = dir / (table1::Columns()[column].name + ".conf");
    testing::WriteFileOrDie(path,
                            SerializeConfig(table1::ColumnDocument(column)));
    return Execute(TargetSpec::External(std::string(CONFFUZZ_GNB_VALIDATOR) +
                                        " {input}"),
                   testing::ReadFileOrDie(path));
  };
  const ExecResult ok = run(0);
  EXPECT_EQ(ok.outcome.cls, OutcomeClass::kOk);
  EXPECT_EQ(ok.feedback, ValidateGnbText(table1::InitialText()).feedback);
  const ExecResult crash = run(5);
  EXPECT_EQ(crash.outcome.cls, OutcomeClass::kCrash);
  EXPECT_EQ(crash.outcome.code, SIGABRT);
  EXPECT_THAT(crash.feedback.branches, Contains("chk:band_known:no"));

  const ExecResult reject = Execute(
      TargetSpec::External(std::string(CONFFUZZ_GNB_VALIDATOR) + " {input}"),
      "do_CSIRS = ;");
  EXPECT_EQ(reject.outcome.cls, OutcomeClass::kReject);
  EXPECT_EQ(reject.outcome.code, kGnbRejectCode);
}

}  // namespace
}  // namespace conffuzz
