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

// Context-free grammars in the JSON grammar-mutator format and the
// derivation trees generated from them.
//
// A grammar file is a JSON object. Each key is a token name `<IDENT>`, each
// value is a list of rules, each rule a list of strings. A string equal to a
// defined token name refers to that token; every other string is literal
// text. Generation starts from `<START>`.
//
//   {"<START>": [["do_CSIRS = ", "<BIT>", ";"]],
//    "<BIT>":   [["0"], ["1"]]}

#ifndef CONFFUZZ_CORE_GRAMMAR_H_
#define CONFFUZZ_CORE_GRAMMAR_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace conffuzz {

inline constexpr std::string_view kStartToken = "<START>";

// True iff `name` is `<` IDENT `>` with IDENT drawn from [A-Za-z0-9_-]+.
bool IsTokenName(std::string_view name);

struct RuleItem {
  enum class Kind { kLiteral, kTokenRef };
  Kind kind = Kind::kLiteral;
  // Literal text, or the referenced token name.
  std::string text;

  bool is_ref() const { return kind == Kind::kTokenRef; }
  bool operator==(const RuleItem&) const = default;
};

struct Rule {
  std::vector<RuleItem> items;

  size_t RefCount() const;
  bool operator==(const Rule&) const = default;
};

class Grammar {
 public:
  // Throws Error with kMalformedJson, kBadTokenName, kUndefinedTokenRef
  // (strict only), kNoFiniteDerivation or kMissingStart.
  static Grammar Parse(std::string_view json_text, bool strict);
  static Grammar Load(const std::filesystem::path& path, bool strict);

  const std::string& start() const { return start_; }

  // Token names in file order.
  std::vector<std::string> tokens() const;
  size_t token_count() const { return productions_.size(); }
  size_t total_rule_count() const;

  bool HasToken(std::string_view token) const;
  // Throws kInvalidArgument for an unknown token.
  const std::vector<Rule>& rules(std::string_view token) const;

  // Depth of the shallowest finite derivation; a leaf-only derivation has
  // depth 1.
  uint32_t MinDepth(std::string_view token) const;
  uint32_t RuleMinDepth(std::string_view token, size_t rule_index) const;
  // Node count of the smallest finite derivation (saturating).
  uint64_t MinSize(std::string_view token) const;
  // Rule used by the smallest derivation; lowest index on ties.
  size_t MinimalRule(std::string_view token) const;

 private:
  struct Production {
    std::string token;
    std::vector<Rule> rules;
    std::vector<uint32_t> rule_min_depth;
    std::vector<uint64_t> rule_min_size;
    uint32_t min_depth = 0;
    uint64_t min_size = 0;
    size_t minimal_rule = 0;
  };

  const Production& production(std::string_view token) const;
  void ComputeDerivationTables();

  std::string start_{kStartToken};
  std::vector<Production> productions_;
  std::unordered_map<std::string, size_t> index_;
};

// One node per expanded token. `children` holds one subtree per TokenRef of
// the chosen rule, in rule order.
struct DerivationTree {
  std::string token;
  uint32_t rule_index = 0;
  std::vector<DerivationTree> children;

  bool operator==(const DerivationTree&) const = default;
};

// Deterministic in (grammar, seed, max_depth). Throws kDepthInfeasible when
// max_depth is below the start token's minimal derivation depth.
DerivationTree GenerateTree(const Grammar& grammar, uint64_t seed,
                            uint32_t max_depth);

// Expands `token` drawing rule choices from `rng`. Only rules whose minimal
// depth fits in `depth_budget` are eligible, so generation always
// terminates. The budget is raised to the token's minimal depth if lower.
DerivationTree GenerateSubtree(const Grammar& grammar, std::string_view token,
                               std::mt19937_64& rng, uint32_t depth_budget);

// The smallest derivation of `token` (MinimalRule at every node).
DerivationTree MinimalTree(const Grammar& grammar, std::string_view token);

// Throws kInvalidTree if !ValidateTree(tree, grammar).
std::string Unparse(const DerivationTree& tree, const Grammar& grammar);

bool ValidateTree(const DerivationTree& tree, const Grammar& grammar);

size_t TreeSize(const DerivationTree& tree);
uint32_t TreeDepth(const DerivationTree& tree);

// Compact textual encoding, e.g. `<START>#0(<BIT>#1)`. Two trees are equal
// iff their encodings are byte-equal.
std::string SerializeTree(const DerivationTree& tree);

// Recovers a derivation of `text` from the start token, or nullopt if the
// grammar does not admit it. Left-recursive alternatives are not explored.
std::optional<DerivationTree> ParseWithGrammar(const Grammar& grammar,
                                               std::string_view text);

}  // namespace conffuzz

#endif  // CONFFUZZ_CORE_GRAMMAR_H_
