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

#include "core/mutate.h"

#include <array>
#include <functional>
#include <set>
#include <string>

#include "core/error.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace conffuzz {
namespace {

constexpr std::string_view kBitGrammar =
    R"({"<START>": [["do_CSIRS = ", "<BIT>", ";"]], "<BIT>": [["0"], ["1"]]})";

Grammar GnbGrammar() {
  return Grammar::Load(testing::SourcePath("grammars/gnb.json"), true);
}

TEST(MutateTest, RegenerateSingleNodeTree) {
  const Grammar g = Grammar::Parse(R"({"<START>": [["a"], ["b"]]})", true);
  const DerivationTree leaf{"<START>", 0, {}};
  std::set<std::string> seen;
  for (uint64_t seed = 0; seed < 64; ++seed) {
    const DerivationTree out = MutateRegenerate(leaf, g, seed);
    EXPECT_TRUE(ValidateTree(out, g));
    seen.insert(Unparse(out, g));
  }
  EXPECT_EQ(seen, (std::set<std::string>{"a", "b"}));
}

TEST(MutateTest, OneDerivationGrammarIsFixed) {
  const Grammar g = Grammar::Parse(R"({"<START>": [["only"]]})", true);
  const DerivationTree t = GenerateTree(g, 0, 4);
  for (uint64_t seed = 0; seed < 16; ++seed) {
    EXPECT_EQ(MutateRegenerate(t, g, seed), t);
    EXPECT_EQ(MutateRuleSwap(t, g, seed), t);
    EXPECT_EQ(MutateScalar(t, g, seed), t);
    EXPECT_EQ(MutateSplice(t, t, g, seed), t);
  }
}

TEST(MutateTest, RuleSwapFlipsBit) {
  const Grammar g = Grammar::Parse(kBitGrammar, true);
  const DerivationTree t{"<START>", 0, {DerivationTree{"<BIT>", 0, {}}}};
  for (uint64_t seed = 0; seed < 16; ++seed) {
    EXPECT_EQ(Unparse(MutateRuleSwap(t, g, seed), g), "do_CSIRS = 1;");
  }
}

TEST(MutateTest, RuleSwapChangesExactlyOneRuleChoice) {
  const Grammar g = GnbGrammar();
  for (uint64_t seed = 0; seed < 500; ++seed) {
    const DerivationTree t = GenerateTree(g, seed, 64);
    const DerivationTree out = MutateRuleSwap(t, g, seed * 31 + 1);
    ASSERT_TRUE(ValidateTree(out, g));
    EXPECT_NE(out, t);
  }
}

TEST(MutateTest, ScalarTweakStaysWithinAlternatives) {
  const Grammar g = Grammar::Parse(
      R"({"<START>": [["bw = ", "<BW>", ";"]], "<BW>": [["25"], ["24"], ["106"]]})",
      true);
  const DerivationTree t{"<START>", 0, {DerivationTree{"<BW>", 0, {}}}};
  std::set<std::string> seen;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const DerivationTree out = MutateScalar(t, g, seed);
    ASSERT_TRUE(ValidateTree(out, g));
    seen.insert(Unparse(out, g));
  }
  EXPECT_EQ(seen, (std::set<std::string>{"bw = 24;", "bw = 106;"}));
}

TEST(MutateTest, ScalarTweakIgnoresNonNumericTokens) {
  const Grammar g = Grammar::Parse(
      R"({"<START>": [["<W>"]], "<W>": [["abc"], ["def"]]})", true);
  const DerivationTree t = MinimalTree(g, "<START>");
  EXPECT_EQ(MutateScalar(t, g, 3), t);
}

TEST(MutateTest, SpliceSharingOnlyRoot) {
  const Grammar g = Grammar::Parse(
      R"({"<START>": [["<A>"], ["<B>"]], "<A>": [["a"]], "<B>": [["b"]]})",
      true);
  const DerivationTree a{"<START>", 0, {DerivationTree{"<A>", 0, {}}}};
  const DerivationTree b{"<START>", 1, {DerivationTree{"<B>", 0, {}}}};
  for (uint64_t seed = 0; seed < 32; ++seed) {
    const DerivationTree out = MutateSplice(a, b, g, seed);
    EXPECT_TRUE(out == a || out == b);
  }
}

TEST(MutateTest, SpliceReplacesSubtreeWithDonorSubtree) {
  const Grammar g = GnbGrammar();
  const DerivationTree t = MinimalTree(g, g.start());
  const DerivationTree donor = GenerateTree(g, 99, 64);
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const DerivationTree out = MutateSplice(t, donor, g, seed);
    ASSERT_TRUE(ValidateTree(out, g));
    EXPECT_TRUE(ValidateTree(MutateSplice(out, out, g, seed), g));
  }
}

using Mutator = std::function<DerivationTree(const DerivationTree&,
                                             const Grammar&, uint64_t)>;

// Closure of every operator over generated trees.
TEST(MutateTest, ClosureProperty) {
  const Grammar g = GnbGrammar();
  const std::vector<std::pair<std::string, Mutator>> mutators = {
      {"regenerate",
       [](const DerivationTree& t, const Grammar& g, uint64_t s) {
         return MutateRegenerate(t, g, s);
       }},
      {"rule_swap", MutateRuleSwap},
      {"splice",
       [](const DerivationTree& t, const Grammar& g, uint64_t s) {
         return MutateSplice(t, GenerateTree(g, s ^ 0x5eed, 64), g, s);
       }},
      {"scalar", MutateScalar},
  };
  for (const auto& [name, mutate] : mutators) {
    DerivationTree t = GenerateTree(g, 1, 64);
    for (uint64_t i = 0; i < 10000; ++i) {
      if (i % 50 == 0) t = GenerateTree(g, i, 64);
      t = mutate(t, g, i);
      ASSERT_TRUE(ValidateTree(t, g)) << name << " step " << i;
      ASSERT_LE(TreeDepth(t), kDefaultMaxDepth) << name;
    }
  }
}

TEST(MutateTest, RandomMutationIsDeterministic) {
  const Grammar g = GnbGrammar();
  const DerivationTree t = GenerateTree(g, 5, 64);
  for (uint64_t seed = 0; seed < 100; ++seed) {
    auto [a, ka] = RandomMutation(t, g, seed);
    auto [b, kb] = RandomMutation(t, g, seed);
    EXPECT_EQ(a, b);
    EXPECT_EQ(ka, kb);
  }
}

TEST(MutateTest, SingleWeightSelectsKind) {
  const Grammar g = GnbGrammar();
  const DerivationTree t = GenerateTree(g, 5, 64);
  for (size_t k = 0; k < kMutationKindCount; ++k) {
    MutationWeights w{};
    w[k] = 1;
    for (uint64_t seed = 0; seed < 50; ++seed) {
      EXPECT_EQ(RandomMutation(t, g, seed, w).second,
                static_cast<MutationKind>(k));
    }
  }
}

TEST(MutateTest, WeightErrors) {
  const Grammar g = Grammar::Parse(kBitGrammar, true);
  const DerivationTree t = MinimalTree(g, g.start());
  try {
    RandomMutation(t, g, 0, MutationWeights{0, 0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllZeroWeights);
  }
  try {
    RandomMutation(t, g, 0, MutationWeights{1, -1, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

// Counting oracle: observed kind shares within two percentage points of the
// normalized weights.
TEST(MutateTest, KindFrequenciesFollowWeights) {
  const Grammar g = Grammar::Parse(kBitGrammar, true);
  const DerivationTree t = MinimalTree(g, g.start());
  constexpr int kDraws = 100000;
  std::array<int, kMutationKindCount> counts{};
  for (uint64_t seed = 0; seed < kDraws; ++seed) {
    ++counts[static_cast<size_t>(RandomMutation(t, g, seed).second)];
  }
  double total_weight = 0;
  for (double w : kDefaultMutationWeights) total_weight += w;
  for (size_t k = 0; k < kMutationKindCount; ++k) {
    const double expected = kDefaultMutationWeights[k] / total_weight;
    const double observed = static_cast<double>(counts[k]) / kDraws;
    EXPECT_NEAR(observed, expected, 0.02)
        << MutationKindName(static_cast<MutationKind>(k));
  }
}

TEST(MutateTest, KindNames) {
  EXPECT_EQ(MutationKindName(MutationKind::kRegenerate), "regenerate");
  EXPECT_EQ(MutationKindName(MutationKind::kScalarTweak), "scalar-tweak");
}

}  // namespace
}  // namespace conffuzz
