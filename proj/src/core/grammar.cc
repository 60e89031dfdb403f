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

#include "core/grammar.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "core/error.h"
#include "json.hpp"

namespace conffuzz {
namespace {

constexpr uint32_t kInfDepth = std::numeric_limits<uint32_t>::max();
constexpr uint64_t kInfSize = std::numeric_limits<uint64_t>::max();

uint64_t SaturatingAdd(uint64_t a, uint64_t b) {
  return a > kInfSize - b ? kInfSize : a + b;
}

bool IsIdentChar(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-';
}

void AppendUnparsed(const DerivationTree& node, const Grammar& grammar,
                    std::string& out) {
  const Rule& rule = grammar.rules(node.token)[node.rule_index];
  size_t child = 0;
  for (const RuleItem& item : rule.items) {
    if (item.is_ref()) {
      AppendUnparsed(node.children[child++], grammar, out);
    } else {
      out += item.text;
    }
  }
}

void AppendSerialized(const DerivationTree& node, std::string& out) {
  out += node.token;
  out += '#';
  out += std::to_string(node.rule_index);
  if (node.children.empty()) return;
  out += '(';
  for (size_t i = 0; i < node.children.size(); ++i) {
    if (i > 0) out += ',';
    AppendSerialized(node.children[i], out);
  }
  out += ')';
}

// Memoized all-spans matcher: for (token, position) it records every end
// position reachable by some derivation, keeping the first derivation found
// for each end.
class GrammarMatcher {
 public:
  using Ends = std::map<size_t, DerivationTree>;

  GrammarMatcher(const Grammar& grammar, std::string_view text)
      : grammar_(grammar), text_(text) {}

  const Ends& Match(const std::string& token, size_t pos) {
    const auto key = std::make_pair(token, pos);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (active_.contains(key)) return empty_;
    active_.insert(key);

    Ends result;
    const std::vector<Rule>& rules = grammar_.rules(token);
    for (size_t r = 0; r < rules.size(); ++r) {
      std::map<size_t, std::vector<DerivationTree>> states;
      states.emplace(pos, std::vector<DerivationTree>{});
      for (const RuleItem& item : rules[r].items) {
        std::map<size_t, std::vector<DerivationTree>> next;
        for (const auto& [at, kids] : states) {
          if (!item.is_ref()) {
            if (text_.substr(at).starts_with(item.text)) {
              next.emplace(at + item.text.size(), kids);
            }
            continue;
          }
          for (const auto& [end, subtree] : Match(item.text, at)) {
            if (next.contains(end)) continue;
            std::vector<DerivationTree> extended = kids;
            extended.push_back(subtree);
            next.emplace(end, std::move(extended));
          }
        }
        states = std::move(next);
        if (states.empty()) break;
      }
      for (auto& [end, kids] : states) {
        if (result.contains(end)) continue;
        result.emplace(end, DerivationTree{token, static_cast<uint32_t>(r),
                                           std::move(kids)});
      }
    }

    active_.erase(key);
    return memo_.emplace(key, std::move(result)).first->second;
  }

 private:
  const Grammar& grammar_;
  std::string_view text_;
  std::map<std::pair<std::string, size_t>, Ends> memo_;
  std::set<std::pair<std::string, size_t>> active_;
  const Ends empty_;
};

}  // namespace

bool IsTokenName(std::string_view name) {
  if (name.size() < 3 || name.front() != '<' || name.back() != '>') {
    return false;
  }
  return std::all_of(name.begin() + 1, name.end() - 1, IsIdentChar);
}

size_t Rule::RefCount() const {
  return static_cast<size_t>(std::count_if(
      items.begin(), items.end(), [](const RuleItem& i) { return i.is_ref(); }));
}

Grammar Grammar::Parse(std::string_view json_text, bool strict) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kMalformedJson, "grammar must be a JSON object");
  }

  Grammar grammar;
  std::vector<std::vector<std::vector<std::string>>> raw_rules;
  for (const auto& [key, value] : doc.items()) {
    if (!IsTokenName(key)) {
      throw Error(ErrorCode::kBadTokenName, "bad token name: " + key);
    }
    if (!value.is_array()) {
      throw Error(ErrorCode::kMalformedJson,
                  "rules of " + key + " must be an array");
    }
    std::vector<std::vector<std::string>> token_rules;
    for (const auto& rule : value) {
      if (!rule.is_array()) {
        throw Error(ErrorCode::kMalformedJson,
                    "each rule of " + key + " must be an array of strings");
      }
      std::vector<std::string> items;
      for (const auto& item : rule) {
        if (!item.is_string()) {
          throw Error(ErrorCode::kMalformedJson,
                      "rule items of " + key + " must be strings");
        }
        items.push_back(item.get<std::string>());
      }
      token_rules.push_back(std::move(items));
    }
    grammar.index_.emplace(key, grammar.productions_.size());
    Production production;
    production.token = key;
    grammar.productions_.push_back(std::move(production));
    raw_rules.push_back(std::move(token_rules));
  }

  for (size_t p = 0; p < raw_rules.size(); ++p) {
    for (auto& items : raw_rules[p]) {
      Rule rule;
      for (auto& text : items) {
        if (grammar.index_.contains(text)) {
          rule.items.push_back({RuleItem::Kind::kTokenRef, std::move(text)});
          continue;
        }
        if (strict && IsTokenName(text)) {
          throw Error(ErrorCode::kUndefinedTokenRef,
                      "undefined token " + text + " referenced by " +
                          grammar.productions_[p].token);
        }
        rule.items.push_back({RuleItem::Kind::kLiteral, std::move(text)});
      }
      grammar.productions_[p].rules.push_back(std::move(rule));
    }
  }

  auto start = grammar.index_.find(grammar.start_);
  if (start == grammar.index_.end() ||
      grammar.productions_[start->second].rules.empty()) {
    throw Error(ErrorCode::kMissingStart,
                "grammar has no rules for " + grammar.start_);
  }
  grammar.ComputeDerivationTables();
  return grammar;
}

Grammar Grammar::Load(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot read grammar " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return Parse(text.str(), strict);
}

void Grammar::ComputeDerivationTables() {
  for (Production& p : productions_) {
    p.rule_min_depth.assign(p.rules.size(), kInfDepth);
    p.rule_min_size.assign(p.rules.size(), kInfSize);
    p.min_depth = kInfDepth;
    p.min_size = kInfSize;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (Production& p : productions_) {
      for (size_t r = 0; r < p.rules.size(); ++r) {
        uint32_t depth = 1;
        uint64_t size = 1;
        bool finite = true;
        for (const RuleItem& item : p.rules[r].items) {
          if (!item.is_ref()) continue;
          const Production& child = productions_[index_.at(item.text)];
          if (child.min_depth == kInfDepth) {
            finite = false;
            break;
          }
          depth = std::max(depth, child.min_depth + 1);
          size = SaturatingAdd(size, child.min_size);
        }
        if (!finite) continue;
        if (depth < p.rule_min_depth[r]) {
          p.rule_min_depth[r] = depth;
          changed = true;
        }
        if (size < p.rule_min_size[r]) {
          p.rule_min_size[r] = size;
          changed = true;
        }
        p.min_depth = std::min(p.min_depth, p.rule_min_depth[r]);
        p.min_size = std::min(p.min_size, p.rule_min_size[r]);
      }
    }
  }
  for (Production& p : productions_) {
    if (p.min_depth == kInfDepth) {
      throw Error(ErrorCode::kNoFiniteDerivation,
                  "token " + p.token + " has no finite derivation");
    }
    p.minimal_rule = static_cast<size_t>(
        std::min_element(p.rule_min_size.begin(), p.rule_min_size.end()) -
        p.rule_min_size.begin());
  }
}

std::vector<std::string> Grammar::tokens() const {
  std::vector<std::string> out;
  out.reserve(productions_.size());
  for (const Production& p : productions_) out.push_back(p.token);
  return out;
}

size_t Grammar::total_rule_count() const {
  size_t n = 0;
  for (const Production& p : productions_) n += p.rules.size();
  return n;
}

bool Grammar::HasToken(std::string_view token) const {
  return index_.contains(std::string(token));
}

const Grammar::Production& Grammar::production(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown token " + std::string(token));
  }
  return productions_[it->second];
}

const std::vector<Rule>& Grammar::rules(std::string_view token) const {
  return production(token).rules;
}

uint32_t Grammar::MinDepth(std::string_view token) const {
  return production(token).min_depth;
}

uint32_t Grammar::RuleMinDepth(std::string_view token,
                               size_t rule_index) const {
  return production(token).rule_min_depth.at(rule_index);
}

uint64_t Grammar::MinSize(std::string_view token) const {
  return production(token).min_size;
}

size_t Grammar::MinimalRule(std::string_view token) const {
  return production(token).minimal_rule;
}

DerivationTree GenerateSubtree(const Grammar& grammar, std::string_view token,
                               std::mt19937_64& rng, uint32_t depth_budget) {
  const std::vector<Rule>& rules = grammar.rules(token);
  depth_budget = std::max(depth_budget, grammar.MinDepth(token));

  std::vector<uint32_t> eligible;
  eligible.reserve(rules.size());
  for (uint32_t r = 0; r < rules.size(); ++r) {
    if (grammar.RuleMinDepth(token, r) <= depth_budget) eligible.push_back(r);
  }
  std::uniform_int_distribution<size_t> pick(0, eligible.size() - 1);

  DerivationTree node{std::string(token), eligible[pick(rng)], {}};
  for (const RuleItem& item : rules[node.rule_index].items) {
    if (item.is_ref()) {
      node.children.push_back(
          GenerateSubtree(grammar, item.text, rng, depth_budget - 1));
    }
  }
  return node;
}

DerivationTree GenerateTree(const Grammar& grammar, uint64_t seed,
                            uint32_t max_depth) {
  if (max_depth < grammar.MinDepth(grammar.start())) {
    throw Error(ErrorCode::kDepthInfeasible,
                "max depth " + std::to_string(max_depth) +
                    " is below the minimal derivation depth " +
                    std::to_string(grammar.MinDepth(grammar.start())));
  }
  std::mt19937_64 rng(seed);
  return GenerateSubtree(grammar, grammar.start(), rng, max_depth);
}

DerivationTree MinimalTree(const Grammar& grammar, std::string_view token) {
  const size_t r = grammar.MinimalRule(token);
  DerivationTree node{std::string(token), static_cast<uint32_t>(r), {}};
  for (const RuleItem& item : grammar.rules(token)[r].items) {
    if (item.is_ref()) node.children.push_back(MinimalTree(grammar, item.text));
  }
  return node;
}

bool ValidateTree(const DerivationTree& tree, const Grammar& grammar) {
  if (!grammar.HasToken(tree.token)) return false;
  const std::vector<Rule>& rules = grammar.rules(tree.token);
  if (tree.rule_index >= rules.size()) return false;
  const Rule& rule = rules[tree.rule_index];
  if (tree.children.size() != rule.RefCount()) return false;
  size_t child = 0;
  for (const RuleItem& item : rule.items) {
    if (!item.is_ref()) continue;
    const DerivationTree& sub = tree.children[child++];
    if (sub.token != item.text || !ValidateTree(sub, grammar)) return false;
  }
  return true;
}

std::string Unparse(const DerivationTree& tree, const Grammar& grammar) {
  if (!ValidateTree(tree, grammar)) {
    throw Error(ErrorCode::kInvalidTree,
                "derivation tree does not match the grammar");
  }
  std::string out;
  AppendUnparsed(tree, grammar, out);
  return out;
}

size_t TreeSize(const DerivationTree& tree) {
  size_t n = 1;
  for (const DerivationTree& child : tree.children) n += TreeSize(child);
  return n;
}

uint32_t TreeDepth(const DerivationTree& tree) {
  uint32_t deepest = 0;
  for (const DerivationTree& child : tree.children) {
    deepest = std::max(deepest, TreeDepth(child));
  }
  return deepest + 1;
}

std::string SerializeTree(const DerivationTree& tree) {
  std::string out;
  AppendSerialized(tree, out);
  return out;
}

std::optional<DerivationTree> ParseWithGrammar(const Grammar& grammar,
                                               std::string_view text) {
  GrammarMatcher matcher(grammar, text);
  const GrammarMatcher::Ends& ends = matcher.Match(grammar.start(), 0);
  auto it = ends.find(text.size());
  if (it == ends.end()) return std::nullopt;
  return it->second;
}

}  // namespace conffuzz
