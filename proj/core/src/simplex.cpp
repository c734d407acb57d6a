#include "treequench/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace treequench {

Distribution make_distribution(int k, std::span<const double> weights) {
  if (k < 1) throw std::invalid_argument("Distribution: k must be >= 1");
  if (weights.size() != static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("Distribution: expected " + std::to_string(k + 1) +
                                " weights, got " + std::to_string(weights.size()));
  std::vector<double> w(weights.begin(), weights.end());
  for (double& x : w) {
    if (!std::isfinite(x))
      throw std::invalid_argument("Distribution: weights must be finite");
    if (x < -kEpsSum)
      throw std::invalid_argument("Distribution: negative weight " + std::to_string(x));
    if (x < 0.0) x = 0.0;
  }
  double sum = 0.0;
  for (double x : w) sum += x;
  if (std::abs(sum - 1.0) > kEpsSum)
    throw std::invalid_argument("Distribution: weights sum to " + std::to_string(sum) +
                                ", expected 1");
  for (double& x : w) x /= sum;
  return Distribution(k, std::move(w));
}

Distribution detail::from_map_output(int k, std::vector<double> w) {
  double sum = 0.0;
  for (double& x : w) {
    if (x < 0.0) {
      if (x < -kEpsSum)
        throw std::logic_error("map output has a negative coordinate (" +
                               std::to_string(x) + ")");
      x = 0.0;
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kEpsSum)
    throw std::logic_error("map output drifted off the simplex (sum " +
                           std::to_string(sum) + ")");
  for (double& x : w) x /= sum;
  return Distribution(k, std::move(w));
}

MaxInfectedBlock max_infected_block(const Distribution& d, double tie_tol) {
  if (!(tie_tol >= 0.0))
    throw std::invalid_argument("max_infected_block: tie_tol must be >= 0");
  const auto& w = d.weights();
  MaxInfectedBlock out;
  out.max_value = *std::max_element(w.begin(), w.end() - 1);
  for (int s = 1; s <= d.k(); ++s)
    if (w[static_cast<std::size_t>(s - 1)] >= out.max_value - tie_tol)
      out.states.push_back(s);
  out.count = static_cast<int>(out.states.size());
  return out;
}

}  // namespace treequench
