// CSV/JSON serialization for the library types. CSV doubles carry 17
// significant digits so every value round-trips exactly.
#pragma once

#include <iosfwd>
#include <string>

#include "treequench/exact_dynamics.hpp"
#include "treequench/rules.hpp"
#include "treequench/simplex.hpp"
#include "treequench/tree_sim.hpp"

namespace treequench {

std::string format_double(double x);  // %.17g

const char* stop_reason_name(StopReason r);  // "Converged" | "MaxIterations"

// {"k": 2, "weights": [0.4, 0.3, 0.3]}
std::string distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const std::string& text);

// k+1 comma-separated fields, no trailing newline.
std::string distribution_to_csv(const Distribution& d);

// One row per step: n, the k+1 weights, z, y, diff.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec);
void write_trajectory_json(std::ostream& os, const TrajectoryRecord& rec);

// {"counts": [...], "total": N, "empirical": [...]}
std::string histogram_to_json(const RootHistogram& h);
void write_histogram_csv(std::ostream& os, const RootHistogram& h);

// {"k": 2, "entries": [[...], [...], [...]]} with 1-based state indices.
CombineTable combine_table_from_json(const std::string& text);
CombineTable load_combine_table(const std::string& path);

}  // namespace treequench
