#include "treequench/rules.hpp"

#include <stdexcept>
#include <string>

namespace treequench {

CombineTable::CombineTable(int k, std::vector<std::vector<int>> entries)
    : k_(k), entries_(std::move(entries)) {
  if (k_ < 1) throw std::invalid_argument("CombineTable: k must be >= 1");
  const std::size_t n = static_cast<std::size_t>(k_) + 1;
  if (entries_.size() != n)
    throw std::invalid_argument("CombineTable: expected " + std::to_string(n) + " rows");
  for (const auto& row : entries_)
    if (row.size() != n)
      throw std::invalid_argument("CombineTable: expected " + std::to_string(n) +
                                  " columns per row");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const int s = entries_[i][j];
      if (s < 1 || s > k_ + 1)
        throw std::invalid_argument("CombineTable: entry " + std::to_string(s) +
                                    " at (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ") is out of range");
      if (entries_[i][j] != entries_[j][i])
        throw std::invalid_argument(
            "CombineTable: table must be symmetric (children are unordered)");
    }
}

CombineTable CombineTable::standard(int k) {
  if (k < 1) throw std::invalid_argument("CombineTable: k must be >= 1");
  const int empty = k + 1;
  std::vector<std::vector<int>> e(static_cast<std::size_t>(empty),
                                  std::vector<int>(static_cast<std::size_t>(empty), empty));
  for (int i = 1; i <= k; ++i) {
    e[i - 1][i - 1] = i;          // coalescence
    e[i - 1][empty - 1] = i;      // lone infection wins
    e[empty - 1][i - 1] = i;
  }
  return CombineTable(k, std::move(e));
}

int rule_arity(const RuleSet& rules) {
  if (const auto* d = std::get_if<DAryRules>(&rules)) return d->d;
  return 2;
}

void validate_rules(const RuleSet& rules, int k) {
  if (k < 1) throw std::invalid_argument("rules: k must be >= 1");
  if (const auto* m = std::get_if<MutationRules>(&rules)) {
    if (!(m->q > 0.0 && m->q < 1.0))
      throw std::invalid_argument("mutation rules: q must lie strictly in (0, 1)");
    if (k != 2)
      throw std::invalid_argument("mutation rules are defined for k = 2, got k = " +
                                  std::to_string(k));
  } else if (const auto* d = std::get_if<DAryRules>(&rules)) {
    if (d->d < 2)
      throw std::invalid_argument("d-ary rules: d must be >= 2, got " +
                                  std::to_string(d->d));
  } else if (const auto* t = std::get_if<TableRules>(&rules)) {
    if (t->table.k() != k)
      throw std::invalid_argument("table rules: table is for k = " +
                                  std::to_string(t->table.k()) +
                                  " but the distribution has k = " + std::to_string(k));
  }
}

const char* rule_name(const RuleSet& rules) {
  switch (rules.index()) {
    case 0: return "standard";
    case 1: return "mutation";
    case 2: return "dary";
    default: return "table";
  }
}

}  // namespace treequench
