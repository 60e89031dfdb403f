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

// Structure-preserving mutations over derivation trees. Every operator maps a
// tree that validates against a grammar to another tree that validates
// against the same grammar, and is a pure function of its arguments.

#ifndef CONFFUZZ_CORE_MUTATE_H_
#define CONFFUZZ_CORE_MUTATE_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>

#include "core/grammar.h"

namespace conffuzz {

enum class MutationKind { kRegenerate = 0, kRuleSwap, kSplice, kScalarTweak };

inline constexpr size_t kMutationKindCount = 4;

std::string_view MutationKindName(MutationKind kind);

// Sampling weight per kind, indexed by MutationKind.
using MutationWeights = std::array<double, kMutationKindCount>;

inline constexpr MutationWeights kDefaultMutationWeights = {4, 3, 2, 1};

inline constexpr uint32_t kDefaultMaxDepth = 64;

// Replaces one uniformly chosen node's subtree with a fresh derivation of the
// node's token. The fresh subtree is bounded so the whole tree stays within
// `max_depth` when the input did.
DerivationTree MutateRegenerate(const DerivationTree& tree,
                                const Grammar& grammar, uint64_t seed,
                                uint32_t max_depth = kDefaultMaxDepth);

// Moves one node whose token has two or more rules to a different rule, with
// minimal derivations for the new children. Identity if no such node exists.
DerivationTree MutateRuleSwap(const DerivationTree& tree,
                              const Grammar& grammar, uint64_t seed);

// Replaces a random subtree of `tree` by a subtree of `donor` rooted at the
// same token. Identity if the two trees share no token.
DerivationTree MutateSplice(const DerivationTree& tree,
                            const DerivationTree& donor,
                            const Grammar& grammar, uint64_t seed);

// For a node whose token offers two or more integer-literal rules, moves to a
// numerically adjacent alternative (next up, next down, closest to zero, or
// an extreme). Identity if no such node exists.
DerivationTree MutateScalar(const DerivationTree& tree, const Grammar& grammar,
                            uint64_t seed);

// Throws kInvalidArgument for a negative weight, kAllZeroWeights if none is
// positive.
void ValidateWeights(const MutationWeights& weights);

// Samples a kind proportionally to `weights` and applies it. Splice uses
// `donor`, or the tree itself when none is given. Throws kAllZeroWeights.
std::pair<DerivationTree, MutationKind> RandomMutation(
    const DerivationTree& tree, const Grammar& grammar, uint64_t seed,
    const MutationWeights& weights = kDefaultMutationWeights,
    const DerivationTree* donor = nullptr,
    uint32_t max_depth = kDefaultMaxDepth);

}  // namespace conffuzz

#endif  // CONFFUZZ_CORE_MUTATE_H_
