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

#include "core/config.h"

#include <string>

#include "core/error.h"
#include "core/grammar.h"
#include "core/table1.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace conffuzz {
namespace {

using ::testing::HasSubstr;

Error CaptureError(std::string_view text) {
  try {
    ParseConfig(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error for " << text;
  return Error(ErrorCode::kInvalidArgument, "");
}

const ParamPath kBandwidth =
    ParamPath::Parse("gNBs[0].servingCellConfigCommon[0].dl_carrierBandwidth");

TEST(ConfigTest, SingleIntSetting) {
  const ConfigDocument doc = ParseConfig("do_CSIRS = 1;");
  ASSERT_EQ(doc.root.settings.size(), 1);
  EXPECT_EQ(doc.root.settings[0].name, "do_CSIRS");
  EXPECT_EQ(GetParam(doc, ParamPath::Parse("do_CSIRS")), Scalar::Int(1));
}

TEST(ConfigTest, NestedPathResolves) {
  const ConfigDocument doc = ParseConfig(
      "gNBs = ( { servingCellConfigCommon = ( { absoluteFrequencySSB = "
      "641280; } ); } );");
  EXPECT_EQ(GetParam(doc, ParamPath::Parse("gNBs[0].servingCellConfigCommon[0]"
                                           ".absoluteFrequencySSB")),
            Scalar::Int(641280));
}

TEST(ConfigTest, ScalarKindsAndComments) {
  const ConfigDocument doc = ParseConfig(R"(
    # hash comment
    a = -25;      // line comment
    b = 1.5;  /* block
                 comment */
    c = "quoted \"text\"";
    d = TRUE;
    e = false;
    f = +7;
    g = { h = ( 1, 2, 3 ); };
  )");
  EXPECT_EQ(GetParam(doc, ParamPath::Parse("a")), Scalar::Int(-25));
  EXPECT_EQ(GetParam(doc, ParamPath::Parse("b")), Scalar::Real(1.5));
  EXPECT_EQ(GetParam(doc, ParamPath::Parse("c")), Scalar::Str("quoted \"text\""));
  EXPECT_EQ(GetParam(doc, ParamPath::Parse("d")), Scalar::Bool(true));
  EXPECT_EQ(GetParam(doc, ParamPath::Parse("e")), Scalar::Bool(false));
  EXPECT_EQ(GetParam(doc, ParamPath::Parse("f")), Scalar::Int(7));
  EXPECT_EQ(GetParam(doc, ParamPath::Parse("g.h[2]")), Scalar::Int(3));
}

TEST(ConfigTest, SyntaxErrorsCarryPosition) {
  const Error e = CaptureError("x = 1 y = 2;");
  EXPECT_EQ(e.code(), ErrorCode::kSyntaxError);
  EXPECT_THAT(e.what(), HasSubstr("1:7"));

  EXPECT_EQ(CaptureError("a = ;").code(), ErrorCode::kSyntaxError);
  EXPECT_EQ(CaptureError("a = \"open;").code(), ErrorCode::kSyntaxError);
  EXPECT_EQ(CaptureError("a = ( 1, 2;").code(), ErrorCode::kSyntaxError);
  EXPECT_EQ(CaptureError("1a = 2;").code(), ErrorCode::kSyntaxError);
  EXPECT_EQ(CaptureError("a = 99999999999999999999;").code(),
            ErrorCode::kSyntaxError);
  EXPECT_THAT(CaptureError("a = 1;\n\n  b = ;").what(), HasSubstr("3:"));
}

TEST(ConfigTest, DuplicateNames) {
  EXPECT_EQ(CaptureError("a = 1; a = 2;").code(), ErrorCode::kDuplicateName);
  EXPECT_EQ(CaptureError("g = { a = 1; a = 2; };").code(),
            ErrorCode::kDuplicateName);
  EXPECT_NO_THROW(ParseConfig("g = { a = 1; }; h = { a = 2; };"));
}

TEST(ConfigTest, SerializeCanonicalForms) {
  EXPECT_EQ(SerializeConfig(ConfigDocument{}), "");
  EXPECT_EQ(SerializeConfig(ParseConfig("do_SRS=1;")), "do_SRS = 1;\n");
  EXPECT_EQ(SerializeConfig(ParseConfig("g = {}; l = ();")),
            "g = {};\nl = ();\n");
  EXPECT_EQ(SerializeConfig(ParseConfig("r = 2.0; s = \"a\\nb\";")),
            "r = 2.0;\ns = \"a\\nb\";\n");
  EXPECT_EQ(SerializeConfig(ParseConfig("l = (1,2);")),
            "l = (\n  1,\n  2\n);\n");
}

TEST(ConfigTest, InitialFixtureIsCanonical) {
  const ConfigDocument doc = table1::InitialDocument();
  EXPECT_EQ(SerializeConfig(doc), table1::InitialText());
  EXPECT_EQ(GetParam(doc, kBandwidth), Scalar::Int(106));
}

TEST(ConfigTest, RoundTripOnGeneratedConfigurations) {
  const Grammar g =
      Grammar::Load(testing::SourcePath("grammars/gnb.json"), true);
  for (uint64_t seed = 0; seed < 2000; ++seed) {
    const ConfigDocument doc = ParseConfig(Unparse(GenerateTree(g, seed, 64), g));
    const std::string canonical = SerializeConfig(doc);
    const ConfigDocument again = ParseConfig(canonical);
    ASSERT_EQ(again, doc) << "seed " << seed;
    ASSERT_EQ(SerializeConfig(again), canonical);
  }
}

TEST(ConfigTest, RoundTripScalarEdgeCases) {
  ConfigDocument doc;
  doc.root.settings.push_back({"neg", Value{Scalar::Int(INT64_MIN)}});
  doc.root.settings.push_back({"tiny", Value{Scalar::Real(1e-300)}});
  doc.root.settings.push_back({"third", Value{Scalar::Real(1.0 / 3)}});
  doc.root.settings.push_back({"str", Value{Scalar::Str("tab\there\x01")}});
  doc.root.settings.push_back({"yes", Value{Scalar::Bool(true)}});
  EXPECT_EQ(ParseConfig(SerializeConfig(doc)), doc);
}

TEST(ConfigTest, GetParamErrors) {
  const ConfigDocument doc = table1::InitialDocument();
  try {
    GetParam(doc, ParamPath::Parse("gNBs[0].nope"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPathNotFound);
  }
  try {
    GetParam(doc, ParamPath::Parse("gNBs[0]"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotAScalar);
  }
  EXPECT_FALSE(FindParam(doc, ParamPath::Parse("gNBs[3].gNB_ID")).has_value());
}

TEST(ConfigTest, SetParam) {
  const ConfigDocument doc = table1::InitialDocument();
  const ParamPath band =
      ParamPath::Parse("gNBs[0].servingCellConfigCommon[0].dl_frequencyBand");
  const ConfigDocument case5 = SetParam(doc, band, Scalar::Int(257));
  EXPECT_EQ(case5, table1::ColumnDocument(5));
  EXPECT_EQ(GetParam(case5, band), Scalar::Int(257));
  EXPECT_EQ(SetParam(doc, band, Scalar::Int(78)), doc);
  try {
    SetParam(doc, ParamPath::Parse("missing"), Scalar::Int(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPathNotFound);
  }
}

TEST(ConfigTest, ParamPathSyntax) {
  const ParamPath p = ParamPath::Parse("gNBs[0].plmn_list[12].mcc");
  EXPECT_EQ(p.segments().size(), 5);
  EXPECT_EQ(p.ToString(), "gNBs[0].plmn_list[12].mcc");
  EXPECT_EQ(ParamPath().Child("a").Index(1).Child("b").ToString(), "a[1].b");
  for (const char* bad : {"", "a..b", "a[", "a[x]", ".a", "a.", "1a"}) {
    EXPECT_THROW(ParamPath::Parse(bad), Error) << bad;
  }
}

TEST(ConfigTest, DiffAgainstCase1) {
  const std::vector<ParamDiff> diff =
      DiffParams(table1::InitialDocument(), table1::ColumnDocument(1));
  ASSERT_EQ(diff.size(), 5);
  const std::string cell = "gNBs[0].servingCellConfigCommon[0].";
  auto find = [&](const std::string& path) -> const ParamDiff* {
    for (const ParamDiff& d : diff) {
      if (d.path.ToString() == path) return &d;
    }
    return nullptr;
  };
  const ParamDiff* coreset = find(cell + "controlResourceSetZero");
  ASSERT_NE(coreset, nullptr);
  EXPECT_EQ(coreset->before, Scalar::Int(12));
  EXPECT_EQ(coreset->after, Scalar::Int(9));
  const ParamDiff* ss0 = find(cell + "searchSpaceZero");
  ASSERT_NE(ss0, nullptr);
  EXPECT_EQ(ss0->before, Scalar::Int(0));
  EXPECT_EQ(ss0->after, Scalar::Int(9));
}

TEST(ConfigTest, DiffProperties) {
  const ConfigDocument a = table1::InitialDocument();
  EXPECT_TRUE(DiffParams(a, a).empty());
  for (size_t i = 1; i < table1::Columns().size(); ++i) {
    const ConfigDocument b = table1::ColumnDocument(i);
    const auto ab = DiffParams(a, b);
    const auto ba = DiffParams(b, a);
    ASSERT_EQ(ab.size(), ba.size());
    for (size_t k = 0; k < ab.size(); ++k) {
      EXPECT_EQ(ab[k].path, ba[k].path);
      EXPECT_EQ(ab[k].before, ba[k].after);
      EXPECT_EQ(ab[k].after, ba[k].before);
    }
  }
  const auto added = DiffParams(ParseConfig("a = 1;"), ParseConfig("a = 1; b = 2;"));
  ASSERT_EQ(added.size(), 1);
  EXPECT_FALSE(added[0].before.has_value());
  EXPECT_EQ(added[0].after, Scalar::Int(2));
}

TEST(ConfigTest, ScalarLeavesInDocumentOrder) {
  const auto leaves = ScalarLeaves(ParseConfig("a = 1; g = { b = (2, 3); };"));
  ASSERT_EQ(leaves.size(), 3);
  EXPECT_EQ(leaves[0].first.ToString(), "a");
  EXPECT_EQ(leaves[1].first.ToString(), "g.b[0]");
  EXPECT_EQ(leaves[2].second, Scalar::Int(3));
}

}  // namespace
}  // namespace conffuzz
