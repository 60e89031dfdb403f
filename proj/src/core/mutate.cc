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

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "core/error.h"

namespace conffuzz {
namespace {

struct NodeRef {
  DerivationTree* node;
  uint32_t depth;  // root is 1
};

void CollectNodes(DerivationTree& node, uint32_t depth,
                  std::vector<NodeRef>& out) {
  out.push_back({&node, depth});
  for (DerivationTree& child : node.children) {
    CollectNodes(child, depth + 1, out);
  }
}

std::vector<NodeRef> Nodes(DerivationTree& tree) {
  std::vector<NodeRef> out;
  CollectNodes(tree, 1, out);
  return out;
}

template <typename T>
const T& PickUniform(const std::vector<T>& items, std::mt19937_64& rng) {
  std::uniform_int_distribution<size_t> pick(0, items.size() - 1);
  return items[pick(rng)];
}

// Assigns `rule_index` to `node` and fills its children with minimal
// derivations.
void SetRuleMinimally(DerivationTree& node, const Grammar& grammar,
                      uint32_t rule_index) {
  node.rule_index = rule_index;
  node.children.clear();
  for (const RuleItem& item : grammar.rules(node.token)[rule_index].items) {
    if (item.is_ref()) node.children.push_back(MinimalTree(grammar, item.text));
  }
}

std::optional<int64_t> IntegerLiteral(const Rule& rule) {
  if (rule.items.size() != 1 || rule.items[0].is_ref()) return std::nullopt;
  const std::string& text = rule.items[0].text;
  size_t digits_at = (!text.empty() && text[0] == '-') ? 1 : 0;
  if (text.size() == digits_at) return std::nullopt;
  for (size_t i = digits_at; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
  }
  int64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

struct IntAlternative {
  int64_t value;
  uint32_t rule_index;
};

// Integer-literal alternatives of `token`, ordered by value then rule index.
std::vector<IntAlternative> IntAlternatives(const Grammar& grammar,
                                            const std::string& token) {
  std::vector<IntAlternative> out;
  const std::vector<Rule>& rules = grammar.rules(token);
  for (uint32_t r = 0; r < rules.size(); ++r) {
    if (auto v = IntegerLiteral(rules[r])) out.push_back({*v, r});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const IntAlternative& a, const IntAlternative& b) {
                     return a.value < b.value;
                   });
  return out;
}

}  // namespace

std::string_view MutationKindName(MutationKind kind) {
  switch (kind) {
    case MutationKind::kRegenerate: return "regenerate";
    case MutationKind::kRuleSwap: return "rule-swap";
    case MutationKind::kSplice: return "splice";
    case MutationKind::kScalarTweak: return "scalar-tweak";
  }
  return "unknown";
}

DerivationTree MutateRegenerate(const DerivationTree& tree,
                                const Grammar& grammar, uint64_t seed,
                                uint32_t max_depth) {
  std::mt19937_64 rng(seed);
  DerivationTree out = tree;
  const std::vector<NodeRef> nodes = Nodes(out);
  const NodeRef target = PickUniform(nodes, rng);
  const uint32_t budget =
      max_depth >= target.depth ? max_depth - target.depth + 1 : 0;
  *target.node = GenerateSubtree(grammar, target.node->token, rng, budget);
  return out;
}

DerivationTree MutateRuleSwap(const DerivationTree& tree,
                              const Grammar& grammar, uint64_t seed) {
  std::mt19937_64 rng(seed);
  DerivationTree out = tree;
  std::vector<DerivationTree*> candidates;
  for (const NodeRef& ref : Nodes(out)) {
    if (grammar.rules(ref.node->token).size() >= 2) {
      candidates.push_back(ref.node);
    }
  }
  if (candidates.empty()) return out;

  DerivationTree* target = PickUniform(candidates, rng);
  const size_t rule_count = grammar.rules(target->token).size();
  std::uniform_int_distribution<uint32_t> pick(
      0, static_cast<uint32_t>(rule_count - 2));
  uint32_t next = pick(rng);
  if (next >= target->rule_index) ++next;
  SetRuleMinimally(*target, grammar, next);
  return out;
}

DerivationTree MutateSplice(const DerivationTree& tree,
                            const DerivationTree& donor,
                            const Grammar& grammar, uint64_t seed) {
  (void)grammar;
  std::mt19937_64 rng(seed);
  // Copy first: `donor` may alias `tree`.
  DerivationTree donor_copy = donor;
  DerivationTree out = tree;

  std::vector<NodeRef> donor_nodes = Nodes(donor_copy);
  std::vector<DerivationTree*> targets;
  for (const NodeRef& ref : Nodes(out)) {
    const bool shared = std::any_of(
        donor_nodes.begin(), donor_nodes.end(),
        [&](const NodeRef& d) { return d.node->token == ref.node->token; });
    if (shared) targets.push_back(ref.node);
  }
  if (targets.empty()) return out;

  DerivationTree* target = PickUniform(targets, rng);
  std::vector<const DerivationTree*> sources;
  for (const NodeRef& d : donor_nodes) {
    if (d.node->token == target->token) sources.push_back(d.node);
  }
  *target = *PickUniform(sources, rng);
  return out;
}

DerivationTree MutateScalar(const DerivationTree& tree, const Grammar& grammar,
                            uint64_t seed) {
  std::mt19937_64 rng(seed);
  DerivationTree out = tree;
  std::vector<DerivationTree*> candidates;
  for (const NodeRef& ref : Nodes(out)) {
    if (IntAlternatives(grammar, ref.node->token).size() >= 2) {
      candidates.push_back(ref.node);
    }
  }
  if (candidates.empty()) return out;

  DerivationTree* target = PickUniform(candidates, rng);
  const std::vector<IntAlternative> alts =
      IntAlternatives(grammar, target->token);
  const auto current = std::find_if(
      alts.begin(), alts.end(),
      [&](const IntAlternative& a) { return a.rule_index == target->rule_index; });

  std::vector<uint32_t> moves;
  if (current != alts.end()) {
    if (current + 1 != alts.end()) moves.push_back((current + 1)->rule_index);
    if (current != alts.begin()) moves.push_back((current - 1)->rule_index);
  }
  const auto closest_to_zero = std::min_element(
      alts.begin(), alts.end(), [](const IntAlternative& a, const IntAlternative& b) {
        // |INT64_MIN| would overflow; compare as unsigned magnitudes.
        auto mag = [](int64_t v) {
          return v < 0 ? 0 - static_cast<uint64_t>(v) : static_cast<uint64_t>(v);
        };
        return mag(a.value) < mag(b.value);
      });
  moves.push_back(closest_to_zero->rule_index);
  moves.push_back(alts.front().rule_index);
  moves.push_back(alts.back().rule_index);
  std::erase(moves, target->rule_index);
  if (moves.empty()) return out;

  SetRuleMinimally(*target, grammar, PickUniform(moves, rng));
  return out;
}

void ValidateWeights(const MutationWeights& weights) {
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "mutation weights must be nonnegative");
    }
    total += w;
  }
  if (total <= 0) {
    throw Error(ErrorCode::kAllZeroWeights, "all mutation weights are zero");
  }
}

std::pair<DerivationTree, MutationKind> RandomMutation(
    const DerivationTree& tree, const Grammar& grammar, uint64_t seed,
    const MutationWeights& weights, const DerivationTree* donor,
    uint32_t max_depth) {
  ValidateWeights(weights);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
  const auto kind = static_cast<MutationKind>(pick(rng));
  const uint64_t op_seed = rng();
  switch (kind) {
    case MutationKind::kRegenerate:
      return {MutateRegenerate(tree, grammar, op_seed, max_depth), kind};
    case MutationKind::kRuleSwap:
      return {MutateRuleSwap(tree, grammar, op_seed), kind};
    case MutationKind::kSplice:
      return {MutateSplice(tree, donor ? *donor : tree, grammar, op_seed),
              kind};
    case MutationKind::kScalarTweak:
      return {MutateScalar(tree, grammar, op_seed), kind};
  }
  std::abort();
}

}  // namespace conffuzz
