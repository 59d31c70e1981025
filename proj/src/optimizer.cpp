#include "pooltrace/optimizer.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "pooltrace/errors.hpp"

namespace pooltrace {

namespace {

void require_table(const CostTable& cost) {
  if (cost.empty() || cost.objective.size() != static_cast<std::size_t>(cost.n_max) + 1) {
    throw ParameterError("cost table is empty or incomplete");
  }
}

}  // namespace

std::string PoolDesign::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += std::to_string(sizes[i]);
  }
  return out;
}

double design_objective(const std::vector<int>& sizes, const CostTable& cost) {
  std::vector<int> ascending(sizes);
  std::sort(ascending.begin(), ascending.end());
  double total = 0.0;
  for (int s : ascending) {
    total += cost.g(s);
  }
  return total;
}

PoolDesign make_design(std::vector<int> sizes, const CostTable& cost) {
  require_table(cost);
  long sum = 0;
  for (int s : sizes) {
    if (s < 1 || s > cost.n_max) {
      throw ParameterError("pool size " + std::to_string(s) + " outside [1, " +
                           std::to_string(cost.n_max) + "]");
    }
    sum += s;
  }
  if (sum != cost.n_max) {
    throw ParameterError("pool sizes sum to " + std::to_string(sum) + ", expected " +
                         std::to_string(cost.n_max));
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  PoolDesign design;
  design.total = cost.n_max;
  design.objective_value = design_objective(sizes, cost);
  design.sizes = std::move(sizes);
  return design;
}

PoolDesign optimal_design(const CostTable& cost) {
  require_table(cost);
  const int n_max = cost.n_max;
  const auto size = static_cast<std::size_t>(n_max) + 1;
  std::vector<double> best(size, 0.0);
  std::vector<int> choice(size, 0);
  for (int n = 1; n <= n_max; ++n) {
    double h = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int j = 1; j <= n; ++j) {
      const double candidate = cost.g(j) + best[static_cast<std::size_t>(n - j)];
      if (candidate < h) {
        h = candidate;
        arg = j;
      }
    }
    best[static_cast<std::size_t>(n)] = h;
    choice[static_cast<std::size_t>(n)] = arg;
  }

  PoolDesign design;
  design.total = n_max;
  for (int n = n_max; n > 0; n -= choice[static_cast<std::size_t>(n)]) {
    design.sizes.push_back(choice[static_cast<std::size_t>(n)]);
  }
  std::sort(design.sizes.begin(), design.sizes.end(), std::greater<>());
  design.objective_value = best[size - 1];
  return design;
}

PoolDesign brute_force_design(const CostTable& cost) {
  require_table(cost);
  const int n_max = cost.n_max;
  if (n_max > kBruteForceMaxContacts) {
    throw RefusalError("brute-force enumeration refused for N=" + std::to_string(n_max) +
                       " (limit " + std::to_string(kBruteForceMaxContacts) + ")");
  }

  std::vector<int> current;
  std::vector<int> best_sizes;
  double best_value = std::numeric_limits<double>::infinity();

  // Parts are generated in non-increasing order, so every partition is
  // visited exactly once.
  std::function<void(int, int, double)> visit = [&](int remaining, int max_part, double partial) {
    if (remaining == 0) {
      const bool better = partial < best_value;
      const bool tie = partial == best_value &&
                       std::lexicographical_compare(current.begin(), current.end(),
                                                    best_sizes.begin(), best_sizes.end());
      if (better || tie) {
        best_value = partial;
        best_sizes = current;
      }
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      current.push_back(part);
      visit(remaining - part, part, partial + cost.g(part));
      current.pop_back();
    }
  };
  visit(n_max, n_max, 0.0);

  PoolDesign design;
  design.total = n_max;
  design.sizes = std::move(best_sizes);
  design.objective_value = best_value;
  return design;
}

}  // namespace pooltrace
