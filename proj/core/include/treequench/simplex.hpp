// Closed probability simplex over k infection states plus an empty state.
// States are 1-based throughout the library: 1..k are infections, k+1 is
// the empty (not infected) state.
#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace treequench {

class Distribution;

namespace detail {
// Wraps the raw output of a one-level map. The maps preserve the simplex
// algebraically, so coordinates below -kEpsSum or a sum further than
// kEpsSum from 1 indicate an implementation bug and throw std::logic_error.
// Otherwise tiny negatives are clamped and the vector is divided through,
// keeping thousand-step trajectories pinned to the simplex.
Distribution from_map_output(int k, std::vector<double> weights);
}  // namespace detail

// Slack allowed on the sum-to-one constraint: absorbs one multiply-add of
// round-off per coordinate per map application.
inline constexpr double kEpsSum = 1e-12;

// Default tolerance for deciding whether leading infection weights tie.
inline constexpr double kDefaultTieTol = 1e-9;

class Distribution {
 public:
  int k() const { return k_; }
  int size() const { return static_cast<int>(weights_.size()); }  // k + 1
  const std::vector<double>& weights() const { return weights_; }
  // Weight of a 1-based state; state k+1 is the empty state.
  double weight(int state) const {
    return weights_[static_cast<std::size_t>(state - 1)];
  }
  double empty_weight() const { return weights_.back(); }
  bool operator==(const Distribution&) const = default;

 private:
  Distribution(int k, std::vector<double> weights)
      : k_(k), weights_(std::move(weights)) {}

  friend Distribution make_distribution(int k, std::span<const double> weights);
  friend Distribution detail::from_map_output(int k, std::vector<double> weights);

  int k_;
  std::vector<double> weights_;
};

// Validating constructor: k >= 1, exactly k+1 finite entries, none below
// -kEpsSum. Entries in [-kEpsSum, 0) are clamped to zero; the vector is
// renormalized when its raw sum is within kEpsSum of 1 and rejected
// (std::invalid_argument) otherwise.
Distribution make_distribution(int k, std::span<const double> weights);

inline Distribution make_distribution(int k, std::initializer_list<double> weights) {
  return make_distribution(k, std::span<const double>(weights.begin(), weights.size()));
}

inline Distribution make_distribution(int k, const std::vector<double>& weights) {
  return make_distribution(k, std::span<const double>(weights.data(), weights.size()));
}

struct MaxInfectedBlock {
  int count = 0;            // number of tied leading states
  double max_value = 0.0;   // the maximal infection weight
  std::vector<int> states;  // 1-based states within tie_tol of the maximum, ascending
};

// The set of maximal infection entries; the empty state never participates.
// tie_tol must be >= 0.
MaxInfectedBlock max_infected_block(const Distribution& d, double tie_tol);

}  // namespace treequench
