#include "treequench/exact_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace treequench {
namespace {

std::vector<double> raw_standard(const std::vector<double>& x, int k) {
  std::vector<double> out(static_cast<std::size_t>(k) + 1);
  const double e = x[static_cast<std::size_t>(k)];
  for (int i = 0; i < k; ++i) out[i] = x[i] * x[i] + 2.0 * x[i] * e;
  double cross = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) cross += x[i] * x[j];
  out[static_cast<std::size_t>(k)] = e * e + 2.0 * cross;
  return out;
}

std::vector<double> raw_mutation(const std::vector<double>& x, double q) {
  const double x1 = x[0], x2 = x[1], e = x[2];
  return {x1 * x1 + 2.0 * q * x1 * e,
          x2 * x2 + 2.0 * q * x2 * e,
          e * e + 2.0 * x1 * x2 + 2.0 * (1.0 - q) * x1 * e + 2.0 * (1.0 - q) * x2 * e};
}

double int_pow(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<double> raw_dary(const std::vector<double>& x, int k, int d) {
  std::vector<double> out(static_cast<std::size_t>(k) + 1);
  const double e = x[static_cast<std::size_t>(k)];
  const double empty_pow = int_pow(e, d);
  double infected = 0.0;
  for (int i = 0; i < k; ++i) {
    out[i] = int_pow(x[i] + e, d) - empty_pow;
    infected += out[i];
  }
  out[static_cast<std::size_t>(k)] = 1.0 - infected;
  return out;
}

std::vector<double> raw_table(const std::vector<double>& x, const CombineTable& t) {
  const int n = t.k() + 1;
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      out[static_cast<std::size_t>(t.parent(a, b) - 1)] += x[a - 1] * x[b - 1];
  return out;
}

struct DiagnosticsContext {
  std::vector<int> sorted_states;
  int block_size = 0;
};

DiagnosticsContext make_context(const Distribution& d0, double tie_tol) {
  DiagnosticsContext ctx;
  ctx.sorted_states.resize(static_cast<std::size_t>(d0.k()));
  std::iota(ctx.sorted_states.begin(), ctx.sorted_states.end(), 1);
  std::stable_sort(ctx.sorted_states.begin(), ctx.sorted_states.end(),
                   [&](int a, int b) { return d0.weight(a) > d0.weight(b); });
  ctx.block_size = max_infected_block(d0, tie_tol).count;
  return ctx;
}

StepDiagnostics diagnostics_for(const Distribution& d, const DiagnosticsContext& ctx) {
  const int k = d.k();
  const auto& w = d.weights();
  const double empty = w[static_cast<std::size_t>(k)];
  double tail = 0.0;       // ranks 2..k
  double tail_skip = 0.0;  // ranks 2..k without rank block_size + 1
  for (int r = 2; r <= k; ++r) {
    const double v = w[static_cast<std::size_t>(ctx.sorted_states[r - 1] - 1)];
    tail += v;
    if (r != ctx.block_size + 1) tail_skip += v;
  }
  StepDiagnostics out;
  out.z = empty - tail;
  out.y = empty - tail_skip;
  out.diff =
      ctx.block_size < k
          ? w[static_cast<std::size_t>(ctx.sorted_states[0] - 1)] -
                w[static_cast<std::size_t>(ctx.sorted_states[ctx.block_size] - 1)]
          : 0.0;
  return out;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void check_iterate_options(const IterateOptions& o) {
  if (o.max_steps < 1) throw std::invalid_argument("iterate: max_steps must be >= 1");
  if (!(o.conv_tol > 0.0)) throw std::invalid_argument("iterate: conv_tol must be > 0");
  if (!(o.diag_tie_tol >= 0.0))
    throw std::invalid_argument("iterate: diag_tie_tol must be >= 0");
}

}  // namespace

Distribution apply_standard(const Distribution& d) {
  return detail::from_map_output(d.k(), raw_standard(d.weights(), d.k()));
}

Distribution apply_mutation(const Distribution& d, double q) {
  validate_rules(RuleSet{MutationRules{q}}, d.k());
  return detail::from_map_output(d.k(), raw_mutation(d.weights(), q));
}

Distribution apply_dary(const Distribution& d, int arity) {
  validate_rules(RuleSet{DAryRules{arity}}, d.k());
  return detail::from_map_output(d.k(), raw_dary(d.weights(), d.k(), arity));
}

Distribution apply_table(const Distribution& d, const CombineTable& table) {
  validate_rules(RuleSet{TableRules{table}}, d.k());
  return detail::from_map_output(d.k(), raw_table(d.weights(), table));
}

Distribution apply_rules(const Distribution& d, const RuleSet& rules) {
  return detail::from_map_output(d.k(), map_raw(d, rules));
}

std::vector<double> map_raw(const Distribution& d, const RuleSet& rules) {
  validate_rules(rules, d.k());
  return std::visit(
      [&](const auto& r) -> std::vector<double> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, StandardRules>)
          return raw_standard(d.weights(), d.k());
        else if constexpr (std::is_same_v<T, MutationRules>)
          return raw_mutation(d.weights(), r.q);
        else if constexpr (std::is_same_v<T, DAryRules>)
          return raw_dary(d.weights(), d.k(), r.d);
        else
          return raw_table(d.weights(), r.table);
      },
      rules);
}

double diagonal_map(double x, int k) { return (1.0 - 2.0 * k) * x * x + 2.0 * x; }

double diagonal_attractor(int k) {
  if (k < 1) throw std::invalid_argument("diagonal_attractor: k must be >= 1");
  return 1.0 / (2.0 * k - 1.0);
}

double mutation_diagonal_map(double x, double q) {
  return (1.0 - 4.0 * q) * x * x + 2.0 * q * x;
}

double mutation_diagonal_attractor(double q) {
  return q > 0.5 ? (2.0 * q - 1.0) / (4.0 * q - 1.0) : 0.0;
}

TrajectoryRecord iterate(const Distribution& d0, const RuleSet& rules,
                         const IterateOptions& opts) {
  check_iterate_options(opts);
  validate_rules(rules, d0.k());
  const DiagnosticsContext ctx = make_context(d0, opts.diag_tie_tol);
  TrajectoryRecord rec;
  rec.sorted_states = ctx.sorted_states;
  rec.block_size = ctx.block_size;
  rec.steps.push_back(d0);
  rec.diagnostics.push_back(diagnostics_for(d0, ctx));
  for (long long n = 1; n <= opts.max_steps; ++n) {
    Distribution next = apply_rules(rec.steps.back(), rules);
    const double step = sup_distance(next.weights(), rec.steps.back().weights());
    rec.diagnostics.push_back(diagnostics_for(next, ctx));
    rec.steps.push_back(std::move(next));
    if (step < opts.conv_tol) {
      rec.stop_reason = StopReason::kConverged;
      return rec;
    }
  }
  rec.stop_reason = StopReason::kMaxIterations;
  return rec;
}

TrajectoryRecord iterate(const Distribution& d0, const RuleSet& rules,
                         long long max_steps, double conv_tol) {
  IterateOptions opts;
  opts.max_steps = max_steps;
  opts.conv_tol = conv_tol;
  return iterate(d0, rules, opts);
}

LimitResult iterate_limit(const Distribution& d0, const RuleSet& rules,
                          const IterateOptions& opts) {
  check_iterate_options(opts);
  validate_rules(rules, d0.k());
  Distribution cur = d0;
  for (long long n = 1; n <= opts.max_steps; ++n) {
    Distribution next = apply_rules(cur, rules);
    const double step = sup_distance(next.weights(), cur.weights());
    cur = std::move(next);
    if (step < opts.conv_tol) return {std::move(cur), StopReason::kConverged, n};
  }
  return {std::move(cur), StopReason::kMaxIterations, opts.max_steps};
}

std::string limit_case_label(LimitCase c, int block_size) {
  switch (c) {
    case LimitCase::kTheorem1a: return "Theorem1a";
    case LimitCase::kTheorem1b: return "Theorem1b(i=" + std::to_string(block_size) + ")";
    case LimitCase::kTheorem2aP1Wins: return "Theorem2a-p1wins";
    case LimitCase::kTheorem2aP2Wins: return "Theorem2a-p2wins";
    case LimitCase::kTheorem2aTie: return "Theorem2a-tie";
    case LimitCase::kTheorem2bP1Wins: return "Theorem2b-p1wins";
    case LimitCase::kTheorem2bP2Wins: return "Theorem2b-p2wins";
    case LimitCase::kTheorem2bTie: return "Theorem2b-tie";
    case LimitCase::kTheorem2c: return "Theorem2c";
  }
  return "unknown";
}

LimitClassification classify_limit(const Distribution& d0, const RuleSet& rules,
                                   double tie_tol) {
  if (!(tie_tol >= 0.0))
    throw std::invalid_argument("classify_limit: tie_tol must be >= 0");
  validate_rules(rules, d0.k());

  if (std::holds_alternative<StandardRules>(rules)) {
    const MaxInfectedBlock blk = max_infected_block(d0, tie_tol);
    if (!(blk.max_value > 0.0))
      throw std::invalid_argument(
          "classify_limit: no infected mass; the all-empty point is absorbing");
    const int i = blk.count;
    std::vector<double> w(static_cast<std::size_t>(d0.size()), 0.0);
    for (int s : blk.states) w[static_cast<std::size_t>(s - 1)] = 1.0 / (2.0 * i - 1.0);
    w[static_cast<std::size_t>(d0.k())] = (i - 1.0) / (2.0 * i - 1.0);
    return {make_distribution(d0.k(), w),
            i == d0.k() ? LimitCase::kTheorem1a : LimitCase::kTheorem1b, i, tie_tol};
  }

  if (const auto* m = std::get_if<MutationRules>(&rules)) {
    const double q = m->q;
    const double p1 = d0.weight(1);
    const double p2 = d0.weight(2);
    if (!(std::max(p1, p2) > 0.0))
      throw std::invalid_argument(
          "classify_limit: no infected mass; the all-empty point is absorbing");
    const bool tied = std::abs(p1 - p2) <= tie_tol;
    std::vector<double> w(3, 0.0);
    LimitCase c;
    if (q > 0.5) {
      if (tied) {
        const double a = mutation_diagonal_attractor(q);
        w = {a, a, 1.0 / (4.0 * q - 1.0)};
        c = LimitCase::kTheorem2aTie;
      } else if (p1 > p2) {
        w = {1.0, 0.0, 0.0};
        c = LimitCase::kTheorem2aP1Wins;
      } else {
        w = {0.0, 1.0, 0.0};
        c = LimitCase::kTheorem2aP2Wins;
      }
    } else if (q == 0.5) {
      if (tied) {
        w = {0.0, 0.0, 1.0};
        c = LimitCase::kTheorem2bTie;
      } else if (p1 > p2) {
        w = {p1 - p2, 0.0, 1.0 - (p1 - p2)};
        c = LimitCase::kTheorem2bP1Wins;
      } else {
        w = {0.0, p2 - p1, 1.0 - (p2 - p1)};
        c = LimitCase::kTheorem2bP2Wins;
      }
    } else {
      w = {0.0, 0.0, 1.0};
      c = LimitCase::kTheorem2c;
    }
    return {make_distribution(2, w), c, 0, tie_tol};
  }

  throw std::invalid_argument(std::string("classify_limit: no closed form for ") +
                              rule_name(rules) + " rules");
}

ConvergenceRateResult convergence_rate_experiment(double z0, int steps) {
  if (!(z0 > 0.0 && z0 < 1.0))
    throw std::invalid_argument(
        "convergence_rate_experiment: z0 must lie strictly in (0, 1)");
  if (steps < 1)
    throw std::invalid_argument("convergence_rate_experiment: steps must be >= 1");

  // Realize z(0) = z0 at k = 2 with the two infection weights tied, so that
  // z squares exactly each step and the bound is tight.
  const double p2 = (1.0 - z0) / 3.0;
  const double p3 = p2 + z0;
  const double p1 = 1.0 - p2 - p3;
  ConvergenceRateResult out{make_distribution(2, {p1, p2, p3}), {}, true};

  const DiagnosticsContext ctx = make_context(out.d0, kDefaultTieTol);
  Distribution cur = out.d0;
  double bound = z0;
  out.rows.reserve(static_cast<std::size_t>(steps) + 1);
  out.rows.push_back({0, diagnostics_for(cur, ctx).z, bound});
  for (int n = 1; n <= steps; ++n) {
    cur = apply_standard(cur);
    bound *= bound;
    out.rows.push_back({n, diagnostics_for(cur, ctx).z, bound});
  }
  for (const auto& row : out.rows)
    if (!(row.z >= row.bound - kRateBoundEps)) out.bound_holds = false;
  return out;
}

}  // namespace treequench
