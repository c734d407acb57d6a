#include "treequench/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace treequench {
namespace {

// Sequential block size at the bottom of the pairwise-summation recursion.
constexpr long long kPairwiseBlock = 1024;

struct EnumerationContext {
  const std::vector<double>& p;  // leaf law, size k+1
  int k;
  int arity;
  long long leaves;
  const RuleSet& rules;
  bool is_mutation;
  double q = 0.0;
  const CombineTable* table = nullptr;

  // Scratch, reused across configurations (the recursion is sequential).
  std::vector<int> digits;             // 0-based leaf states of the current config
  std::vector<int> state_buf;          // deterministic level reduction
  std::vector<double> dist_buf;        // mutation path: 3 doubles per node
  std::vector<double> dist_next;
};

// Product probability of configuration c, filling ctx.digits on the way.
double decode_config(EnumerationContext& ctx, long long c) {
  const int base = ctx.k + 1;
  double w = 1.0;
  for (long long j = 0; j < ctx.leaves; ++j) {
    const int digit = static_cast<int>(c % base);
    c /= base;
    ctx.digits[static_cast<std::size_t>(j)] = digit;
    w *= ctx.p[static_cast<std::size_t>(digit)];
  }
  return w;
}

// One node under the deterministic rules, 0-based states, empty = k.
int combine_deterministic(const EnumerationContext& ctx, const int* child, int n) {
  if (ctx.table) return ctx.table->entries()[child[0]][child[1]] - 1;
  const int empty = ctx.k;
  int acc = empty;
  bool annihilated = false;
  for (int i = 0; i < n; ++i) {
    const int s = child[i];
    if (s == empty) continue;
    if (acc == empty)
      acc = s;
    else if (acc != s)
      annihilated = true;
  }
  return annihilated ? empty : acc;
}

int deterministic_root(EnumerationContext& ctx) {
  ctx.state_buf.assign(ctx.digits.begin(), ctx.digits.end());
  long long width = ctx.leaves;
  while (width > 1) {
    const long long next = width / ctx.arity;
    for (long long j = 0; j < next; ++j)
      ctx.state_buf[static_cast<std::size_t>(j)] = combine_deterministic(
          ctx, ctx.state_buf.data() + j * ctx.arity, ctx.arity);
    width = next;
  }
  return ctx.state_buf[0];
}

// Mutation node kernel, 0-based states for k = 2 (empty = 2): the coin is
// integrated out, so each node carries its conditional state distribution
// given the leaf assignment.
void combine_mutation(const double* u, const double* v, double q, double* out) {
  out[0] = out[1] = out[2] = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (u[a] == 0.0) continue;
    for (int b = 0; b < 3; ++b) {
      const double m = u[a] * v[b];
      if (m == 0.0) continue;
      if (a == b) {
        out[a] += m;
      } else if (a == 2 || b == 2) {
        const int s = a == 2 ? b : a;
        out[s] += q * m;
        out[2] += (1.0 - q) * m;
      } else {
        out[2] += m;
      }
    }
  }
}

// Root distribution (3 entries appended to out) for the current config.
void mutation_root(EnumerationContext& ctx, double weight, std::vector<double>& acc) {
  auto& cur = ctx.dist_buf;
  auto& next = ctx.dist_next;
  cur.assign(static_cast<std::size_t>(ctx.leaves) * 3, 0.0);
  for (long long j = 0; j < ctx.leaves; ++j)
    cur[static_cast<std::size_t>(j * 3 + ctx.digits[static_cast<std::size_t>(j)])] = 1.0;
  long long width = ctx.leaves;
  while (width > 1) {
    const long long half = width / 2;
    next.assign(static_cast<std::size_t>(half) * 3, 0.0);
    for (long long j = 0; j < half; ++j)
      combine_mutation(cur.data() + 2 * j * 3, cur.data() + (2 * j + 1) * 3, ctx.q,
                       next.data() + j * 3);
    cur.swap(next);
    width = half;
  }
  acc[0] += weight * cur[0];
  acc[1] += weight * cur[1];
  acc[2] += weight * cur[2];
}

// Pairwise summation over the configuration range [lo, hi): ranges above
// kPairwiseBlock are halved and the halves added, so partial sums merge
// the same way no matter how the range is split up.
std::vector<double> sum_range(EnumerationContext& ctx, long long lo, long long hi) {
  if (hi - lo <= kPairwiseBlock) {
    std::vector<double> acc(static_cast<std::size_t>(ctx.k) + 1, 0.0);
    for (long long c = lo; c < hi; ++c) {
      const double w = decode_config(ctx, c);
      if (w == 0.0) continue;
      if (ctx.is_mutation)
        mutation_root(ctx, w, acc);
      else
        acc[static_cast<std::size_t>(deterministic_root(ctx))] += w;
    }
    return acc;
  }
  const long long mid = lo + (hi - lo) / 2;
  std::vector<double> left = sum_range(ctx, lo, mid);
  const std::vector<double> right = sum_range(ctx, mid, hi);
  for (std::size_t i = 0; i < left.size(); ++i) left[i] += right[i];
  return left;
}

}  // namespace

EnumerationResult enumerate_root(const Distribution& d0, const RuleSet& rules,
                                 int height) {
  validate_rules(rules, d0.k());
  if (height < 0) throw std::invalid_argument("enumerate_root: height must be >= 0");

  const int arity = rule_arity(rules);
  long long leaves = 1;
  for (int h = 0; h < height && leaves <= kEnumerationGuard; ++h) leaves *= arity;
  const int base = d0.k() + 1;
  const long double configs_ld =
      std::pow(static_cast<long double>(base), static_cast<long double>(leaves));
  if (!(configs_ld <= static_cast<long double>(kEnumerationGuard)))
    throw std::invalid_argument(
        "enumerate_root: (k+1)^(arity^height) exceeds the enumeration guard of " +
        std::to_string(kEnumerationGuard));
  const long long configs = static_cast<long long>(llroundl(configs_ld));

  EnumerationContext ctx{d0.weights(),
                         d0.k(),
                         arity,
                         leaves,
                         rules,
                         std::holds_alternative<MutationRules>(rules),
                         0.0,
                         nullptr,
                         {},
                         {},
                         {},
                         {}};
  if (const auto* m = std::get_if<MutationRules>(&rules)) ctx.q = m->q;
  if (const auto* t = std::get_if<TableRules>(&rules)) ctx.table = &t->table;
  ctx.digits.resize(static_cast<std::size_t>(leaves));

  std::vector<double> totals = sum_range(ctx, 0, configs);
  return {detail::from_map_output(d0.k(), std::move(totals)), configs};
}

}  // namespace treequench
