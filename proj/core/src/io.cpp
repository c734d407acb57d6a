#include "treequench/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace treequench {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* stop_reason_name(StopReason r) {
  return r == StopReason::kConverged ? "Converged" : "MaxIterations";
}

std::string distribution_to_json(const Distribution& d) {
  std::string out = "{\"k\":" + std::to_string(d.k()) + ",\"weights\":[";
  for (int i = 0; i < d.size(); ++i) {
    if (i) out += ',';
    out += format_double(d.weights()[static_cast<std::size_t>(i)]);
  }
  out += "]}";
  return out;
}

Distribution distribution_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("distribution: bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("k") || !j.contains("weights"))
    throw std::invalid_argument("distribution: expected {\"k\": ..., \"weights\": [...]}");
  if (!j["k"].is_number_integer())
    throw std::invalid_argument("distribution: k must be an integer");
  if (!j["weights"].is_array())
    throw std::invalid_argument("distribution: weights must be an array");
  std::vector<double> w;
  for (const auto& v : j["weights"]) {
    if (!v.is_number()) throw std::invalid_argument("distribution: weights must be numbers");
    w.push_back(v.get<double>());
  }
  return make_distribution(j["k"].get<int>(), w);
}

std::string distribution_to_csv(const Distribution& d) {
  std::string out;
  for (int i = 0; i < d.size(); ++i) {
    if (i) out += ',';
    out += format_double(d.weights()[static_cast<std::size_t>(i)]);
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  const int k = rec.steps.front().k();
  os << "n";
  for (int i = 1; i <= k; ++i) os << ",p" << i;
  os << ",empty,z,y,diff\n";
  for (std::size_t n = 0; n < rec.steps.size(); ++n) {
    os << n << ',' << distribution_to_csv(rec.steps[n]) << ','
       << format_double(rec.diagnostics[n].z) << ','
       << format_double(rec.diagnostics[n].y) << ','
       << format_double(rec.diagnostics[n].diff) << '\n';
  }
}

void write_trajectory_json(std::ostream& os, const TrajectoryRecord& rec) {
  os << "{\"k\":" << rec.steps.front().k() << ",\"stop_reason\":\""
     << stop_reason_name(rec.stop_reason) << "\",\"block_size\":" << rec.block_size
     << ",\"sorted_states\":[";
  for (std::size_t i = 0; i < rec.sorted_states.size(); ++i) {
    if (i) os << ',';
    os << rec.sorted_states[i];
  }
  os << "],\"steps\":[";
  for (std::size_t n = 0; n < rec.steps.size(); ++n) {
    if (n) os << ',';
    os << "{\"n\":" << n << ",\"weights\":[";
    const auto& w = rec.steps[n].weights();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) os << ',';
      os << format_double(w[i]);
    }
    os << "],\"z\":" << format_double(rec.diagnostics[n].z)
       << ",\"y\":" << format_double(rec.diagnostics[n].y)
       << ",\"diff\":" << format_double(rec.diagnostics[n].diff) << '}';
  }
  os << "]}\n";
}

std::string histogram_to_json(const RootHistogram& h) {
  std::string out = "{\"counts\":[";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(h.counts[i]);
  }
  out += "],\"total\":" + std::to_string(h.total) + ",\"empirical\":[";
  const auto freq = h.empirical();
  for (std::size_t i = 0; i < freq.size(); ++i) {
    if (i) out += ',';
    out += format_double(freq[i]);
  }
  out += "]}";
  return out;
}

void write_histogram_csv(std::ostream& os, const RootHistogram& h) {
  os << "state,count,empirical\n";
  const auto freq = h.empirical();
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    os << (i + 1) << ',' << h.counts[i] << ',' << format_double(freq[i]) << '\n';
}

CombineTable combine_table_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("combine table: bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("k") || !j.contains("entries"))
    throw std::invalid_argument("combine table: expected {\"k\": ..., \"entries\": [[...]]}");
  if (!j["k"].is_number_integer())
    throw std::invalid_argument("combine table: k must be an integer");
  if (!j["entries"].is_array())
    throw std::invalid_argument("combine table: entries must be an array of rows");
  std::vector<std::vector<int>> entries;
  for (const auto& row : j["entries"]) {
    if (!row.is_array())
      throw std::invalid_argument("combine table: entries must be an array of rows");
    std::vector<int> r;
    for (const auto& v : row) {
      if (!v.is_number_integer())
        throw std::invalid_argument("combine table: entries must be 1-based state indices");
      r.push_back(v.get<int>());
    }
    entries.push_back(std::move(r));
  }
  return CombineTable(j["k"].get<int>(), std::move(entries));
}

CombineTable load_combine_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("combine table: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return combine_table_from_json(buf.str());
}

}  // namespace treequench
