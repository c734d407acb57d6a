// treequench command line: exact iteration, closed-form limits, Monte Carlo
// simulation, phase-diagram sweeps, and the convergence-rate experiment.
// Identical flags produce byte-identical output unless --timestamp is set.
// Exit codes: 0 success, 2 usage/input error, 3 non-convergence,
// 4 verification failure.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "treequench/exact_dynamics.hpp"
#include "treequench/io.hpp"
#include "treequench/tree_sim.hpp"

namespace tq = treequench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitVerifyFailed = 4;

struct ModelOptions {
  int k = 0;  // 0: inferred from --p
  std::vector<double> p;
  std::string rules = "standard";
  double q = -1.0;
  int arity = 0;
  std::string table_file;
};

void add_model_flags(CLI::App& cmd, ModelOptions& m) {
  cmd.add_option("--k", m.k, "Number of infection states (default: inferred from --p)");
  cmd.add_option("--p", m.p, "Initial distribution: k+1 comma-separated weights")
      ->delimiter(',')
      ->required();
  cmd.add_option("--rules", m.rules, "Combine rules: standard|mutation|dary|table")
      ->check(CLI::IsMember({"standard", "mutation", "dary", "table"}));
  cmd.add_option("--q", m.q, "Mutation retention probability, strictly in (0,1)");
  cmd.add_option("--d", m.arity, "Arity for d-ary rules, >= 2");
  cmd.add_option("--table-file", m.table_file, "JSON combine table for table rules");
}

tq::Distribution model_distribution(const ModelOptions& m) {
  int k = m.k;
  if (k == 0) {
    if (m.p.size() < 2)
      throw std::invalid_argument("--p needs at least two weights");
    k = static_cast<int>(m.p.size()) - 1;
  }
  return tq::make_distribution(k, m.p);
}

tq::RuleSet model_rules(const ModelOptions& m) {
  if (m.rules != "mutation" && m.q >= 0.0)
    throw std::invalid_argument("--q is only meaningful with --rules mutation");
  if (m.rules != "dary" && m.arity != 0)
    throw std::invalid_argument("--d is only meaningful with --rules dary");
  if (m.rules != "table" && !m.table_file.empty())
    throw std::invalid_argument("--table-file is only meaningful with --rules table");
  if (m.rules == "standard") return tq::StandardRules{};
  if (m.rules == "mutation") {
    if (m.q < 0.0) throw std::invalid_argument("mutation rules need --q");
    return tq::MutationRules{m.q};
  }
  if (m.rules == "dary") {
    if (m.arity == 0) throw std::invalid_argument("d-ary rules need --d");
    return tq::DAryRules{m.arity};
  }
  if (m.table_file.empty()) throw std::invalid_argument("table rules need --table-file");
  return tq::TableRules{tq::load_combine_table(m.table_file)};
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file " + out_path);
  f << text;
}

std::string timestamp_line() {
  const std::time_t t = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return std::string("# generated: ") + buf + "\n";
}

// The environment variable wins over the flag so batch schedulers can pin
// concurrency without editing command lines.
int resolve_workers(int flag_workers) {
  if (const char* env = std::getenv("TREEQUENCH_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw std::invalid_argument("TREEQUENCH_WORKERS must be a positive integer");
    return static_cast<int>(v);
  }
  return flag_workers;
}

int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------- iterate

struct IterateArgs {
  ModelOptions model;
  long long steps = 1'000'000;
  double tol = 1e-12;
  double diag_tie_tol = tq::kDefaultTieTol;
  std::string format = "csv";
  std::string out;
  bool timestamp = false;
};

int run_iterate(const IterateArgs& a) {
  const tq::Distribution d0 = model_distribution(a.model);
  const tq::RuleSet rules = model_rules(a.model);
  tq::IterateOptions opts;
  opts.max_steps = a.steps;
  opts.conv_tol = a.tol;
  opts.diag_tie_tol = a.diag_tie_tol;
  const tq::TrajectoryRecord rec = tq::iterate(d0, rules, opts);

  std::ostringstream os;
  if (a.timestamp && a.format == "csv") os << timestamp_line();
  if (a.format == "csv")
    tq::write_trajectory_csv(os, rec);
  else
    tq::write_trajectory_json(os, rec);
  emit(a.out, os.str());
  return rec.stop_reason == tq::StopReason::kConverged ? kExitOk : kExitNoConvergence;
}

// ------------------------------------------------------------------ limit

struct LimitArgs {
  ModelOptions model;
  double tie_tol = tq::kDefaultTieTol;
  bool verify = false;
  double verify_tol = 1e-6;
  long long steps = 1'000'000;
  double tol = 1e-12;
  std::string format = "json";
  std::string out;
};

int run_limit(const LimitArgs& a) {
  const tq::Distribution d0 = model_distribution(a.model);
  const tq::RuleSet rules = model_rules(a.model);
  const tq::LimitClassification cls = tq::classify_limit(d0, rules, a.tie_tol);

  double discrepancy = -1.0;
  long long steps_taken = 0;
  const char* reason = "";
  if (a.verify) {
    tq::IterateOptions opts;
    opts.max_steps = a.steps;
    opts.conv_tol = a.tol;
    const tq::LimitResult lim = tq::iterate_limit(d0, rules, opts);
    discrepancy = sup_distance(lim.limit.weights(), cls.limit.weights());
    steps_taken = lim.steps;
    reason = tq::stop_reason_name(lim.stop_reason);
  }

  std::ostringstream os;
  if (a.format == "json") {
    os << "{\"case\":\"" << tq::limit_case_label(cls) << "\",\"block_size\":"
       << cls.block_size << ",\"tie_tol\":" << tq::format_double(cls.tie_tol)
       << ",\"limit\":" << tq::distribution_to_json(cls.limit);
    if (a.verify)
      os << ",\"verify\":{\"discrepancy\":" << tq::format_double(discrepancy)
         << ",\"steps\":" << steps_taken << ",\"stop_reason\":\"" << reason << "\"}";
    os << "}\n";
  } else {
    os << "case,block_size,tie_tol";
    for (int i = 1; i <= d0.k(); ++i) os << ",limit" << i;
    os << ",limit_empty";
    if (a.verify) os << ",discrepancy";
    os << '\n'
       << tq::limit_case_label(cls) << ',' << cls.block_size << ','
       << tq::format_double(cls.tie_tol) << ',' << tq::distribution_to_csv(cls.limit);
    if (a.verify) os << ',' << tq::format_double(discrepancy);
    os << '\n';
  }
  emit(a.out, os.str());
  if (a.verify && discrepancy > a.verify_tol) return kExitVerifyFailed;
  return kExitOk;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  ModelOptions model;
  int height = 0;
  long long samples = 0;
  std::uint64_t seed = 0;
  int workers = 0;  // 0: hardware concurrency
  std::string format = "json";
  std::string out;
  bool timestamp = false;
};

int run_simulate(const SimulateArgs& a) {
  const tq::Distribution d0 = model_distribution(a.model);
  const tq::RuleSet rules = model_rules(a.model);
  tq::SimConfig cfg;
  cfg.height = a.height;
  cfg.samples = a.samples;
  cfg.master_seed = a.seed;
  cfg.workers = resolve_workers(a.workers > 0 ? a.workers : default_workers());
  const tq::RootHistogram hist = tq::run_sim(d0, rules, cfg);

  tq::Distribution exact = d0;
  for (int h = 0; h < a.height; ++h) exact = tq::apply_rules(exact, rules);
  const std::vector<double> emp = hist.empirical();
  double tv = 0.0;
  for (std::size_t i = 0; i < emp.size(); ++i)
    tv += std::abs(emp[i] - exact.weights()[i]);
  tv *= 0.5;

  std::ostringstream os;
  if (a.format == "json") {
    os << "{\"rules\":\"" << tq::rule_name(rules) << "\",\"k\":" << d0.k()
       << ",\"height\":" << a.height << ",\"samples\":" << a.samples
       << ",\"seed\":" << a.seed << ",\"workers\":" << cfg.workers
       << ",\"counts\":[";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
      if (i) os << ',';
      os << hist.counts[i];
    }
    os << "],\"total\":" << hist.total << ",\"empirical\":[";
    for (std::size_t i = 0; i < emp.size(); ++i) {
      if (i) os << ',';
      os << tq::format_double(emp[i]);
    }
    os << "],\"exact\":[";
    for (std::size_t i = 0; i < emp.size(); ++i) {
      if (i) os << ',';
      os << tq::format_double(exact.weights()[i]);
    }
    os << "],\"tv_distance\":" << tq::format_double(tv) << "}\n";
  } else {
    if (a.timestamp) os << timestamp_line();
    os << "state,count,empirical,exact\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
      os << (i + 1) << ',' << hist.counts[i] << ',' << tq::format_double(emp[i])
         << ',' << tq::format_double(exact.weights()[i]) << '\n';
    os << "tv_distance," << tq::format_double(tv) << '\n';
  }
  emit(a.out, os.str());
  return kExitOk;
}

// ------------------------------------------------------------------ phase

struct PhaseArgs {
  double q_min = 0.0;
  double q_max = -1.0;  // <0: single slice at q_min
  int q_steps = 1;
  int grid = 50;
  std::string mode = "predicted";
  double tie_tol = tq::kDefaultTieTol;
  long long steps = 5'000'000;
  double tol = 1e-13;
  double agree_tol = 1e-6;
  bool include_boundary = false;
  int workers = 0;
  std::string format = "csv";
  std::string out;
  bool timestamp = false;
};

struct PhaseRow {
  double q = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
  bool has_case = false;
  std::string case_label = "none";
  double limit[3] = {0.0, 0.0, 0.0};
  double iter[3] = {0.0, 0.0, 0.0};
  long long steps = 0;
  bool converged = false;
  bool agree = false;
  bool boundary = false;
};

int run_phase(const PhaseArgs& a) {
  if (a.grid < 1) throw std::invalid_argument("--grid must be >= 1");
  if (a.q_steps < 1) throw std::invalid_argument("--q-steps must be >= 1");
  if (a.mode != "predicted" && a.mode != "iterated" && a.mode != "both")
    throw std::invalid_argument("--mode must be predicted, iterated or both");
  const double q_max = a.q_max < 0.0 ? a.q_min : a.q_max;
  if (q_max < a.q_min) throw std::invalid_argument("--q-max must be >= --q-min");

  std::vector<double> qs;
  for (int j = 0; j < a.q_steps; ++j) {
    const double q = a.q_steps == 1
                         ? a.q_min
                         : a.q_min + j * (q_max - a.q_min) / (a.q_steps - 1);
    if (!(q > 0.0 && q < 1.0))
      throw std::invalid_argument("q values must lie strictly in (0, 1)");
    qs.push_back(q);
  }

  const int lo = a.include_boundary ? 0 : 1;
  struct Task {
    double q;
    int a, b;
  };
  std::vector<Task> tasks;
  for (const double q : qs)
    for (int ia = lo; ia <= a.grid - 2 * lo; ++ia)
      for (int ib = lo; ib + ia <= a.grid - lo; ++ib) tasks.push_back({q, ia, ib});

  const bool want_iter = a.mode != "predicted";
  const bool want_case = a.mode != "iterated";
  std::vector<PhaseRow> rows(tasks.size());

  auto compute = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const Task& task = tasks[t];
      PhaseRow& row = rows[t];
      row.q = task.q;
      row.p1 = static_cast<double>(task.a) / a.grid;
      row.p2 = static_cast<double>(task.b) / a.grid;
      row.p3 = static_cast<double>(a.grid - task.a - task.b) / a.grid;
      const tq::Distribution d0 =
          tq::make_distribution(2, {row.p1, row.p2, row.p3});
      row.boundary = std::abs(row.p1 - row.p2) <= a.tie_tol;
      if (want_case) {
        try {
          const tq::LimitClassification cls =
              tq::classify_limit(d0, tq::MutationRules{task.q}, a.tie_tol);
          row.has_case = true;
          row.case_label = tq::limit_case_label(cls);
          for (int i = 0; i < 3; ++i) row.limit[i] = cls.limit.weights()[i];
        } catch (const std::invalid_argument&) {
          // all-empty corner: absorbing, no classification
          row.has_case = false;
          for (int i = 0; i < 3; ++i) row.limit[i] = d0.weights()[i];
        }
      }
      if (want_iter) {
        tq::IterateOptions opts;
        opts.max_steps = a.steps;
        opts.conv_tol = a.tol;
        const tq::LimitResult lim =
            tq::iterate_limit(d0, tq::MutationRules{task.q}, opts);
        for (int i = 0; i < 3; ++i) row.iter[i] = lim.limit.weights()[i];
        row.steps = lim.steps;
        row.converged = lim.stop_reason == tq::StopReason::kConverged;
        if (want_case) {
          double d = 0.0;
          for (int i = 0; i < 3; ++i)
            d = std::max(d, std::abs(row.iter[i] - row.limit[i]));
          row.agree = d <= a.agree_tol;
        }
      }
    }
  };

  const int workers = resolve_workers(a.workers > 0 ? a.workers : default_workers());
  const std::size_t n = tasks.size();
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers),
                                               n == 0 ? 1 : n);
  if (nw <= 1) {
    compute(0, n);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nw; ++w)
      pool.emplace_back(compute, n * w / nw, n * (w + 1) / nw);
    for (auto& th : pool) th.join();
  }

  std::ostringstream os;
  if (a.format == "csv") {
    if (a.timestamp) os << timestamp_line();
    if (a.mode == "predicted")
      os << "q,p1,p2,p3,case,limit1,limit2,limit3,boundary\n";
    else if (a.mode == "iterated")
      os << "q,p1,p2,p3,iter1,iter2,iter3,steps,converged\n";
    else
      os << "q,p1,p2,p3,case,limit1,limit2,limit3,iter1,iter2,iter3,agree,boundary\n";
    for (const PhaseRow& r : rows) {
      os << tq::format_double(r.q) << ',' << tq::format_double(r.p1) << ','
         << tq::format_double(r.p2) << ',' << tq::format_double(r.p3);
      if (a.mode != "iterated")
        os << ',' << r.case_label << ',' << tq::format_double(r.limit[0]) << ','
           << tq::format_double(r.limit[1]) << ',' << tq::format_double(r.limit[2]);
      if (a.mode != "predicted")
        os << ',' << tq::format_double(r.iter[0]) << ','
           << tq::format_double(r.iter[1]) << ',' << tq::format_double(r.iter[2]);
      if (a.mode == "iterated") os << ',' << r.steps << ',' << (r.converged ? 1 : 0);
      if (a.mode == "both") os << ',' << (r.agree ? 1 : 0);
      if (a.mode != "iterated") os << ',' << (r.boundary ? 1 : 0);
      os << '\n';
    }
  } else {
    os << "{\"mode\":\"" << a.mode << "\",\"grid\":" << a.grid << ",\"rows\":[";
    bool first = true;
    for (const PhaseRow& r : rows) {
      if (!first) os << ',';
      first = false;
      os << "{\"q\":" << tq::format_double(r.q) << ",\"p\":["
         << tq::format_double(r.p1) << ',' << tq::format_double(r.p2) << ','
         << tq::format_double(r.p3) << ']';
      if (a.mode != "iterated") {
        os << ",\"case\":\"" << r.case_label << "\",\"limit\":["
           << tq::format_double(r.limit[0]) << ',' << tq::format_double(r.limit[1])
           << ',' << tq::format_double(r.limit[2]) << "],\"boundary\":"
           << (r.boundary ? "true" : "false");
      }
      if (a.mode != "predicted") {
        os << ",\"iterated\":[" << tq::format_double(r.iter[0]) << ','
           << tq::format_double(r.iter[1]) << ',' << tq::format_double(r.iter[2])
           << "],\"steps\":" << r.steps
           << ",\"converged\":" << (r.converged ? "true" : "false");
      }
      if (a.mode == "both") os << ",\"agree\":" << (r.agree ? "true" : "false");
      os << '}';
    }
    os << "]}\n";
  }
  emit(a.out, os.str());
  return kExitOk;
}

// --------------------------------------------------------------- converge

struct ConvergeArgs {
  double z0 = std::numeric_limits<double>::quiet_NaN();
  int target_n = -1;
  int steps = -1;
  std::string format = "csv";
  std::string out;
  bool timestamp = false;
};

int run_converge(const ConvergeArgs& a) {
  const bool has_z0 = !std::isnan(a.z0);
  const bool has_target = a.target_n >= 0;
  if (has_z0 == has_target)
    throw std::invalid_argument("pass exactly one of --z0 and --target-n");
  double z0 = a.z0;
  if (has_target) {
    if (a.target_n < 1) throw std::invalid_argument("--target-n must be >= 1");
    z0 = std::exp2(-std::exp2(-static_cast<double>(a.target_n)));
  }
  const int steps = a.steps > 0 ? a.steps : (has_target ? a.target_n : 10);
  const tq::ConvergenceRateResult res = tq::convergence_rate_experiment(z0, steps);

  std::ostringstream os;
  if (a.format == "csv") {
    if (a.timestamp) os << timestamp_line();
    os << "n,z,bound\n";
    for (const auto& row : res.rows)
      os << row.n << ',' << tq::format_double(row.z) << ','
         << tq::format_double(row.bound) << '\n';
  } else {
    os << "{\"z0\":" << tq::format_double(z0) << ",\"steps\":" << steps
       << ",\"start\":" << tq::distribution_to_json(res.d0)
       << ",\"bound_holds\":" << (res.bound_holds ? "true" : "false")
       << ",\"rows\":[";
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
      if (i) os << ',';
      os << "{\"n\":" << res.rows[i].n << ",\"z\":" << tq::format_double(res.rows[i].z)
         << ",\"bound\":" << tq::format_double(res.rows[i].bound) << '}';
    }
    os << "]}\n";
  }
  emit(a.out, os.str());
  return res.bound_holds ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annihilation-coalescence infection dynamics on rooted trees"};
  app.require_subcommand(1);

  IterateArgs it;
  CLI::App* it_cmd = app.add_subcommand("iterate", "Iterate the exact root recursion");
  add_model_flags(*it_cmd, it.model);
  it_cmd->add_option("--steps", it.steps, "Maximum iterations (default 1e6)");
  it_cmd->add_option("--tol", it.tol, "Convergence tolerance, sup-norm (default 1e-12)");
  it_cmd->add_option("--diag-tie-tol", it.diag_tie_tol,
                     "Tie tolerance fixing the step-0 block for diagnostics");
  it_cmd->add_option("--format", it.format)->check(CLI::IsMember({"csv", "json"}));
  it_cmd->add_option("--out", it.out, "Output file (default stdout)");
  it_cmd->add_flag("--timestamp", it.timestamp, "Prepend a generation timestamp (CSV)");

  LimitArgs lm;
  CLI::App* lm_cmd = app.add_subcommand("limit", "Closed-form limit classification");
  add_model_flags(*lm_cmd, lm.model);
  lm_cmd->add_option("--tie-tol", lm.tie_tol, "Tie tolerance for the case split");
  lm_cmd->add_flag("--verify", lm.verify, "Also iterate and report the discrepancy");
  lm_cmd->add_option("--verify-tol", lm.verify_tol,
                     "Exit 4 when the verify discrepancy exceeds this (default 1e-6)");
  lm_cmd->add_option("--steps", lm.steps, "Maximum iterations for --verify");
  lm_cmd->add_option("--tol", lm.tol, "Convergence tolerance for --verify");
  lm_cmd->add_option("--format", lm.format)->check(CLI::IsMember({"csv", "json"}));
  lm_cmd->add_option("--out", lm.out, "Output file (default stdout)");

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo root-state histogram");
  add_model_flags(*sim_cmd, sim.model);
  sim_cmd->add_option("--height", sim.height, "Tree height (0: root is a leaf)");
  sim_cmd->add_option("--samples", sim.samples, "Independent tree realizations")->required();
  sim_cmd->add_option("--seed", sim.seed, "Master seed (default 0)");
  sim_cmd->add_option("--workers", sim.workers,
                      "Worker threads (default: hardware concurrency)");
  sim_cmd->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "json"}));
  sim_cmd->add_option("--out", sim.out, "Output file (default stdout)");
  sim_cmd->add_flag("--timestamp", sim.timestamp, "Prepend a generation timestamp (CSV)");

  PhaseArgs ph;
  CLI::App* ph_cmd =
      app.add_subcommand("phase", "Limit phase diagram over a barycentric grid");
  ph_cmd->add_option("--q-min", ph.q_min, "First q value")->required();
  ph_cmd->add_option("--q-max", ph.q_max, "Last q value (default: --q-min)");
  ph_cmd->add_option("--q-steps", ph.q_steps, "Number of q slices (default 1)");
  ph_cmd->add_option("--grid", ph.grid, "Barycentric grid resolution (default 50)");
  ph_cmd->add_option("--mode", ph.mode, "predicted|iterated|both (default predicted)");
  ph_cmd->add_option("--tie-tol", ph.tie_tol, "Tie tolerance for the case split");
  ph_cmd->add_option("--steps", ph.steps, "Maximum iterations per grid point");
  ph_cmd->add_option("--tol", ph.tol, "Convergence tolerance per grid point");
  ph_cmd->add_option("--agree-tol", ph.agree_tol,
                     "Sup-norm agreement threshold in both mode (default 1e-6)");
  ph_cmd->add_flag("--include-boundary", ph.include_boundary,
                   "Include grid points with a zero weight");
  ph_cmd->add_option("--workers", ph.workers,
                     "Worker threads (default: hardware concurrency)");
  ph_cmd->add_option("--format", ph.format)->check(CLI::IsMember({"csv", "json"}));
  ph_cmd->add_option("--out", ph.out, "Output file (default stdout)");
  ph_cmd->add_flag("--timestamp", ph.timestamp, "Prepend a generation timestamp (CSV)");

  ConvergeArgs cv;
  CLI::App* cv_cmd =
      app.add_subcommand("converge", "Track z(n) against its squaring lower bound");
  cv_cmd->add_option("--z0", cv.z0, "Initial z value, strictly in (0, 1)");
  cv_cmd->add_option("--target-n", cv.target_n,
                     "Sets z0 = 2^(-2^(-n)) so the bound reaches 0.5 at step n");
  cv_cmd->add_option("--steps", cv.steps, "Steps to run (default: target-n, else 10)");
  cv_cmd->add_option("--format", cv.format)->check(CLI::IsMember({"csv", "json"}));
  cv_cmd->add_option("--out", cv.out, "Output file (default stdout)");
  cv_cmd->add_flag("--timestamp", cv.timestamp, "Prepend a generation timestamp (CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (it_cmd->parsed()) return run_iterate(it);
    if (lm_cmd->parsed()) return run_limit(lm);
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (ph_cmd->parsed()) return run_phase(ph);
    if (cv_cmd->parsed()) return run_converge(cv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
