#pragma once

#include <string>
#include <vector>

#include "pooltrace/cost.hpp"

namespace pooltrace {

/// A partition of the contacts into pools, sizes in non-increasing order.
struct PoolDesign {
  std::vector<int> sizes;
  int total = 0;
  double objective_value = 0.0;

  std::size_t pool_count() const { return sizes.size(); }
  double mean_pool_size() const {
    return sizes.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(sizes.size());
  }
  /// "5,5,5,5"
  std::string to_string() const;

  friend bool operator==(const PoolDesign& a, const PoolDesign& b) { return a.sizes == b.sizes; }
};

/// Design from explicit pool sizes; canonicalizes the order and scores it
/// against `cost`. Throws ParameterError unless the sizes partition cost.n_max.
PoolDesign make_design(std::vector<int> sizes, const CostTable& cost);

/// Sum of g over the design's pools, re-evaluated in ascending size order.
double design_objective(const std::vector<int>& sizes, const CostTable& cost);

/// Minimum-cost partition of N via h(n) = min_j g(j) + h(n - j), O(N^2).
/// Ties in the argmin go to the smallest j.
PoolDesign optimal_design(const CostTable& cost);

/// Largest N brute_force_design will enumerate.
inline constexpr int kBruteForceMaxContacts = 30;

/// Exhaustive search over all integer partitions of N (N <= 30). Exact ties
/// go to the lexicographically smallest non-increasing size sequence.
PoolDesign brute_force_design(const CostTable& cost);

}  // namespace pooltrace
