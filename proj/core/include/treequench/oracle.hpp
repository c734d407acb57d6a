// Ground-truth root distributions for tiny trees by exhaustive enumeration
// of leaf assignments. Mutation coins are never enumerated; they are
// integrated out exactly by propagating a per-node state distribution.
// Independent of the one-level maps: states are combined directly from the
// rule definitions.
#pragma once

#include "treequench/rules.hpp"
#include "treequench/simplex.hpp"

namespace treequench {

inline constexpr long long kEnumerationGuard = 10'000'000;

struct EnumerationResult {
  Distribution distribution;
  long long configurations;  // leaf assignments enumerated
};

// Exact root law for a tree of the given height: sums the product
// probability of every leaf assignment. Rejects inputs where
// (k+1)^(arity^height) exceeds kEnumerationGuard. Partial sums are merged
// by recursive halving of the configuration range, so the result does not
// depend on enumeration order.
EnumerationResult enumerate_root(const Distribution& d0, const RuleSet& rules,
                                 int height);

}  // namespace treequench
