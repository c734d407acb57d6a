// Monte Carlo simulation of the infection process itself: leaves drawn
// i.i.d. from d0, internal nodes combined bottom-up, root states counted.
// No tree is ever materialized; memory per in-flight sample is
// O(height * arity).
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "treequench/rng.hpp"
#include "treequench/rules.hpp"
#include "treequench/simplex.hpp"

namespace treequench {

struct SimConfig {
  int height = 0;  // 0 means the root itself is a leaf
  long long samples = 1;
  std::uint64_t master_seed = 0;
  int workers = 1;  // never changes the counts, only the wall time
};

struct RootHistogram {
  std::vector<long long> counts;  // counts[s-1] holds root state s
  long long total = 0;
  std::vector<double> empirical() const;
};

// Parent state for one internal node; k identifies the empty state (k+1).
// coin must be supplied exactly when rules are MutationRules and exactly
// one child is infected; any other combination is rejected.
int combine(std::span<const int> children, const RuleSet& rules, int k,
            std::optional<double> coin = std::nullopt);

// One root-state sample for a tree of the given height, distributed as the
// height-step image of d0. The stream is consumed depth-first: children
// left to right, then (mutation only) one coin when exactly one child came
// back infected. A leaf consumes exactly one value, mapped through the
// inverse CDF of d0 with half-open buckets.
int sample_root(const Distribution& d0, const RuleSet& rules, int height,
                CounterRng& rng);

// cfg.samples independent root draws. Sample i uses the stream keyed by
// (master_seed, i), so the histogram is bit-identical for any worker count.
RootHistogram run_sim(const Distribution& d0, const RuleSet& rules,
                      const SimConfig& cfg);

}  // namespace treequench
