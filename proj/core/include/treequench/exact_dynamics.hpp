// Exact one-level recursions of the root distribution for each rule set,
// their scalar reductions on the all-tied diagonal, iteration with
// convergence detection and per-step diagnostics, closed-form limit
// classification, and the slow-convergence experiment for z(n).
#pragma once

#include <string>
#include <vector>

#include "treequench/rules.hpp"
#include "treequench/simplex.hpp"

namespace treequench {

// One exact step of the root distribution. Outputs are renormalized onto
// the simplex (see detail::from_map_output).
Distribution apply_standard(const Distribution& d);
Distribution apply_mutation(const Distribution& d, double q);  // k == 2
Distribution apply_dary(const Distribution& d, int arity);
Distribution apply_table(const Distribution& d, const CombineTable& table);
Distribution apply_rules(const Distribution& d, const RuleSet& rules);

// Raw polynomial coordinates of one step, before renormalization.
std::vector<double> map_raw(const Distribution& d, const RuleSet& rules);

// Restriction of the standard map to the diagonal where all k infection
// weights are equal: x -> (1-2k)x^2 + 2x, with attractor 1/(2k-1).
double diagonal_map(double x, int k);
double diagonal_attractor(int k);

// Restriction of the two-state mutation map to the tied diagonal:
// x -> (1-4q)x^2 + 2qx. The attractor is (2q-1)/(4q-1) above q = 0.5 and
// 0 at or below it.
double mutation_diagonal_map(double x, double q);
double mutation_diagonal_attractor(double q);

enum class StopReason { kConverged, kMaxIterations };

// Diagnostics are taken relative to the descending order of infection
// weights at step 0, fixed for the whole trajectory.
struct StepDiagnostics {
  double z;     // empty weight minus every non-leading infection weight
  double y;     // as z, but the first state after the tied block is left out
  double diff;  // gap between the leading state and the first state after
                // the block; 0 when the block covers all of 1..k
};

struct IterateOptions {
  long long max_steps = 1'000'000;
  double conv_tol = 1e-12;               // sup-norm threshold on successive steps
  double diag_tie_tol = kDefaultTieTol;  // fixes the step-0 tied block
};

struct TrajectoryRecord {
  std::vector<Distribution> steps;           // p(0) .. p(N)
  std::vector<StepDiagnostics> diagnostics;  // parallel to steps
  StopReason stop_reason = StopReason::kMaxIterations;
  std::vector<int> sorted_states;  // states 1..k in descending step-0 weight order
  int block_size = 0;              // tied leading states at step 0
};

TrajectoryRecord iterate(const Distribution& d0, const RuleSet& rules,
                         const IterateOptions& opts = {});
TrajectoryRecord iterate(const Distribution& d0, const RuleSet& rules,
                         long long max_steps, double conv_tol);

// Same stepping as iterate, keeping only the final point. Use this for
// long runs; iterate() stores every step.
struct LimitResult {
  Distribution limit;
  StopReason stop_reason;
  long long steps;  // map applications performed
};
LimitResult iterate_limit(const Distribution& d0, const RuleSet& rules,
                          const IterateOptions& opts = {});

enum class LimitCase {
  kTheorem1a,
  kTheorem1b,
  kTheorem2aP1Wins,
  kTheorem2aP2Wins,
  kTheorem2aTie,
  kTheorem2bP1Wins,
  kTheorem2bP2Wins,
  kTheorem2bTie,
  kTheorem2c,
};

struct LimitClassification {
  Distribution limit;
  LimitCase limit_case;
  int block_size;  // i for the Theorem1 cases; 0 for the mutation cases
  double tie_tol;
};

// Label used in CLI/CSV output, e.g. "Theorem1b(i=2)" or "Theorem2a-p1wins".
std::string limit_case_label(LimitCase c, int block_size);
inline std::string limit_case_label(const LimitClassification& lc) {
  return limit_case_label(lc.limit_case, lc.block_size);
}

// Closed-form limit for StandardRules (any k) and MutationRules (k = 2).
// Requires positive maximal infection weight (the all-empty point is
// absorbing and carries no classification). Rule sets without a closed
// form are rejected with std::invalid_argument.
LimitClassification classify_limit(const Distribution& d0, const RuleSet& rules,
                                   double tie_tol = kDefaultTieTol);

// Slack allowed when checking z(n) against its squaring lower bound.
inline constexpr double kRateBoundEps = 1e-12;

struct ConvergenceRateRow {
  int n;
  double z;      // observed along the trajectory
  double bound;  // z0^(2^n)
};

struct ConvergenceRateResult {
  Distribution d0;                       // the constructed start
  std::vector<ConvergenceRateRow> rows;  // n = 0 .. steps
  bool bound_holds;  // z >= bound - kRateBoundEps on every row
};

// Starts a k=2 standard trajectory with z(0) = z0 and the two infection
// weights tied, then tracks z(n) against the squaring lower bound z0^(2^n).
// z0 must lie strictly in (0, 1); steps >= 1.
ConvergenceRateResult convergence_rate_experiment(double z0, int steps);

}  // namespace treequench
