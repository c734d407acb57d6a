// Combine-rule variants governing internal nodes, and the symmetric-table
// generalization of the built-in rules.
#pragma once

#include <variant>
#include <vector>

namespace treequench {

// Symmetric (k+1)x(k+1) assignment of a parent state to every unordered
// pair of child states. Children are unordered, so asymmetric tables are
// rejected at construction.
class CombineTable {
 public:
  // entries[i][j] is the 1-based parent state for child states i+1 and j+1.
  CombineTable(int k, std::vector<std::vector<int>> entries);

  // The built-in binary rules as a table: like states coalesce, distinct
  // infections annihilate, a lone infection beats empty.
  static CombineTable standard(int k);

  int k() const { return k_; }
  int parent(int state_a, int state_b) const {
    return entries_[static_cast<std::size_t>(state_a - 1)]
                   [static_cast<std::size_t>(state_b - 1)];
  }
  const std::vector<std::vector<int>>& entries() const { return entries_; }
  bool operator==(const CombineTable&) const = default;

 private:
  int k_;
  std::vector<std::vector<int>> entries_;
};

struct StandardRules {};

// Two-state variant: a node with exactly one infected child takes that
// state with probability q and stays empty otherwise. Defined for k = 2.
struct MutationRules {
  double q = 0.5;  // strictly inside (0, 1)
};

// Every internal node has d children. A single infection state among
// otherwise-empty children wins; two distinct infections annihilate.
// d = 2 reproduces StandardRules exactly.
struct DAryRules {
  int d = 2;
};

struct TableRules {
  CombineTable table;
};

using RuleSet = std::variant<StandardRules, MutationRules, DAryRules, TableRules>;

// Children combined per internal node: 2 for everything except DAryRules.
int rule_arity(const RuleSet& rules);

// Validates the rule parameters against the distribution dimension k.
// Throws std::invalid_argument on violation.
void validate_rules(const RuleSet& rules, int k);

const char* rule_name(const RuleSet& rules);

}  // namespace treequench
