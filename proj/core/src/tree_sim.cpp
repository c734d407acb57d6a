#include "treequench/tree_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>

namespace treequench {
namespace {

std::vector<double> leaf_cdf(const Distribution& d0) {
  // Upper bucket boundaries after states 1..k; anything above falls
  // through to the empty state. Half-open buckets make zero-weight states
  // unreachable.
  std::vector<double> cum(static_cast<std::size_t>(d0.k()));
  double acc = 0.0;
  for (int i = 0; i < d0.k(); ++i) {
    acc += d0.weights()[static_cast<std::size_t>(i)];
    cum[static_cast<std::size_t>(i)] = acc;
  }
  return cum;
}

int draw_leaf(const std::vector<double>& cum, double u) {
  for (std::size_t i = 0; i < cum.size(); ++i)
    if (u < cum[i]) return static_cast<int>(i) + 1;
  return static_cast<int>(cum.size()) + 1;
}

// A unit draw u = m * 2^-53 satisfies u < c exactly when m < ceil(c * 2^53);
// c * 2^53 is a power-of-two scaling, hence exact. Comparing the raw 53-bit
// mantissa against these thresholds reproduces the double comparison bit for
// bit without the integer-to-double conversion on the hot path.
constexpr double kUnitScale = 9007199254740992.0;  // 2^53

std::uint64_t unit_threshold(double c) {
  return static_cast<std::uint64_t>(std::ceil(c * kUnitScale));
}

std::vector<std::uint64_t> leaf_thresholds(const Distribution& d0) {
  const std::vector<double> cum = leaf_cdf(d0);
  std::vector<std::uint64_t> t(cum.size());
  for (std::size_t i = 0; i < cum.size(); ++i) t[i] = unit_threshold(cum[i]);
  return t;
}

struct StandardCombine {
  int empty;
  // select chain compiles to conditional moves; root states are too
  // unpredictable for branching to pay off
  int operator()(int a, int b, CounterRng&) const {
    int out = empty;
    out = a == empty ? b : out;
    out = b == empty ? a : out;
    out = a == b ? a : out;
    return out;
  }
};

struct MutationCombine {
  int empty;
  std::uint64_t q_threshold;  // unit_threshold(q)
  int operator()(int a, int b, CounterRng& rng) const {
    const bool lone = a != b && (a == empty || b == empty);
    if (lone) {
      const int s = a == empty ? b : a;
      return (rng.next_u64() >> 11) < q_threshold ? s : empty;
    }
    return a == b ? a : empty;
  }
};

struct TableCombine {
  // flattened copy of the table, indexed (a-1)*(k+1) + (b-1)
  const int* flat;
  int stride;
  int operator()(int a, int b, CounterRng&) const {
    return flat[(a - 1) * stride + (b - 1)];
  }
};

// Post-order fold over the 2^height leaves with an O(height) stack. A node
// is combined the moment its right subtree completes, so the stream is
// consumed in exactly the depth-first order the contract pins down.
template <class Combine2>
int sample_binary(int height, const std::vector<std::uint64_t>& thresholds,
                  CounterRng& out_rng, const Combine2& comb) {
  const std::uint64_t* bounds = thresholds.data();
  const int k = static_cast<int>(thresholds.size());
  CounterRng rng = out_rng;  // keep the stream state in registers
  // branch-free inverse CDF: state = 1 + #(bucket boundaries at or below u)
  const auto draw = [&]() {
    const std::uint64_t m = rng.next_u64() >> 11;
    int s = 1;
    for (int i = 0; i < k; ++i) s += m >= bounds[i];
    return s;
  };
  if (height == 0) {
    const int s = draw();
    out_rng = rng;
    return s;
  }
  if (height > 62)
    throw std::invalid_argument("sample_root: height too large to sample");
  int stack[64];
  int top = 0;
  const std::uint64_t leaves = std::uint64_t{1} << height;
  for (std::uint64_t leaf = 0; leaf < leaves; ++leaf) {
    int s = draw();
    for (std::uint64_t m = leaf; m & 1u; m >>= 1) s = comb(stack[--top], s, rng);
    stack[top++] = s;
  }
  out_rng = rng;
  return stack[0];
}

int sample_dary(int height, const std::vector<double>& cum, CounterRng& rng, int d,
                int empty) {
  if (height == 0) return draw_leaf(cum, rng.next_unit());
  int acc = empty;
  bool annihilated = false;
  for (int c = 0; c < d; ++c) {
    const int s = sample_dary(height - 1, cum, rng, d, empty);
    if (s == empty) continue;
    if (acc == empty)
      acc = s;
    else if (acc != s)
      annihilated = true;
  }
  return annihilated ? empty : acc;
}

// Dispatches the rule variant once, then hands a plain draw(rng) callable
// to fn, keeping std::visit out of the per-node path.
template <class Fn>
decltype(auto) with_sampler(const Distribution& d0, const RuleSet& rules, int height,
                            Fn&& fn) {
  const int empty = d0.k() + 1;
  return std::visit(
      [&](const auto& r) -> decltype(auto) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, DAryRules>) {
          const std::vector<double> cum = leaf_cdf(d0);
          return fn([&](CounterRng& rng) { return sample_dary(height, cum, rng, r.d, empty); });
        } else {
          const std::vector<std::uint64_t> thresholds = leaf_thresholds(d0);
          if constexpr (std::is_same_v<T, StandardRules>) {
            const StandardCombine comb{empty};
            return fn(
                [&](CounterRng& rng) { return sample_binary(height, thresholds, rng, comb); });
          } else if constexpr (std::is_same_v<T, MutationRules>) {
            const MutationCombine comb{empty, unit_threshold(r.q)};
            return fn(
                [&](CounterRng& rng) { return sample_binary(height, thresholds, rng, comb); });
          } else {
            const int n = r.table.k() + 1;
            std::vector<int> flat(static_cast<std::size_t>(n) * n);
            for (int a = 1; a <= n; ++a)
              for (int b = 1; b <= n; ++b)
                flat[static_cast<std::size_t>((a - 1) * n + (b - 1))] = r.table.parent(a, b);
            const TableCombine comb{flat.data(), n};
            return fn(
                [&](CounterRng& rng) { return sample_binary(height, thresholds, rng, comb); });
          }
        }
      },
      rules);
}

}  // namespace

std::vector<double> RootHistogram::empirical() const {
  std::vector<double> freq(counts.size(), 0.0);
  if (total > 0)
    for (std::size_t i = 0; i < counts.size(); ++i)
      freq[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return freq;
}

int combine(std::span<const int> children, const RuleSet& rules, int k,
            std::optional<double> coin) {
  validate_rules(rules, k);
  const int arity = rule_arity(rules);
  if (static_cast<int>(children.size()) != arity)
    throw std::invalid_argument("combine: expected " + std::to_string(arity) +
                                " children, got " + std::to_string(children.size()));
  const int empty = k + 1;
  for (int s : children)
    if (s < 1 || s > empty)
      throw std::invalid_argument("combine: state " + std::to_string(s) +
                                  " is out of range");

  int infected = 0;
  int state = empty;
  bool annihilated = false;
  for (int s : children) {
    if (s == empty) continue;
    ++infected;
    if (state == empty)
      state = s;
    else if (state != s)
      annihilated = true;
  }

  const bool needs_coin =
      std::holds_alternative<MutationRules>(rules) && infected == 1;
  if (needs_coin && !coin)
    throw std::invalid_argument(
        "combine: mutation with exactly one infected child requires a coin");
  if (!needs_coin && coin)
    throw std::invalid_argument("combine: coin supplied but never consumed");

  if (const auto* t = std::get_if<TableRules>(&rules))
    return t->table.parent(children[0], children[1]);
  if (needs_coin) {
    if (!(*coin >= 0.0 && *coin < 1.0))
      throw std::invalid_argument("combine: coin must lie in [0, 1)");
    return *coin < std::get<MutationRules>(rules).q ? state : empty;
  }
  if (annihilated) return empty;
  return infected == 0 ? empty : state;
}

int sample_root(const Distribution& d0, const RuleSet& rules, int height,
                CounterRng& rng) {
  validate_rules(rules, d0.k());
  if (height < 0) throw std::invalid_argument("sample_root: height must be >= 0");
  return with_sampler(d0, rules, height,
                      [&](auto&& draw) -> int { return draw(rng); });
}

RootHistogram run_sim(const Distribution& d0, const RuleSet& rules,
                      const SimConfig& cfg) {
  validate_rules(rules, d0.k());
  if (cfg.height < 0) throw std::invalid_argument("run_sim: height must be >= 0");
  if (cfg.samples < 1) throw std::invalid_argument("run_sim: samples must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("run_sim: workers must be >= 1");

  const int states = d0.k() + 1;
  const int nworkers =
      static_cast<int>(std::min<long long>(cfg.workers, cfg.samples));
  std::vector<std::vector<long long>> partial(
      static_cast<std::size_t>(nworkers),
      std::vector<long long>(static_cast<std::size_t>(states), 0));

  auto body = [&](int w) {
    const long long lo = cfg.samples * w / nworkers;
    const long long hi = cfg.samples * (w + 1) / nworkers;
    auto& counts = partial[static_cast<std::size_t>(w)];
    with_sampler(d0, rules, cfg.height, [&](auto&& draw) {
      for (long long i = lo; i < hi; ++i) {
        CounterRng rng(cfg.master_seed, static_cast<std::uint64_t>(i));
        ++counts[static_cast<std::size_t>(draw(rng) - 1)];
      }
    });
  };

  if (nworkers == 1) {
    body(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w) threads.emplace_back(body, w);
    for (auto& t : threads) t.join();
  }

  RootHistogram out;
  out.counts.assign(static_cast<std::size_t>(states), 0);
  out.total = cfg.samples;
  for (const auto& p : partial)
    for (std::size_t s = 0; s < p.size(); ++s) out.counts[s] += p[s];
  return out;
}

}  // namespace treequench
