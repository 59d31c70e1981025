#pragma once

#include <vector>

#include "pooltrace/dist.hpp"

namespace pooltrace {

/// Per-test error model, shared by pooled and individual tests.
struct TestCharacteristics {
  double sensitivity = 1.0;  ///< P(positive | sample holds >= 1 infection)
  double specificity = 1.0;  ///< P(negative | sample holds no infection)

  void validate() const;
};

struct PenaltyWeights {
  double false_negative = 0.0;
  double false_positive = 0.0;

  void validate() const;
};

/// Contact count, transmission prior and test model for one diagnosed case.
struct ModelParams {
  int contacts = 1;
  NegBinParams negbin;
  TestCharacteristics tests;

  void validate() const;
};

/// Distribution of the number of infected members of one pool.
struct PoolCompositionDist {
  int pool_size = 0;
  std::vector<double> probs;  ///< probs[j] = P(pool holds j infected), j = 0..pool_size
};

/// P(I(S) = j) for a pool of the given size, mixing the hypergeometric
/// draw over the prior on the total infected count.
PoolCompositionDist pool_composition(int pool_size, const TruncatedPrior& prior);

/// Same, reusing an existing log-factorial table (size >= prior.n_max()).
PoolCompositionDist pool_composition(int pool_size, const TruncatedPrior& prior,
                                     const LogFactorialTable& log_factorials);

/// Binomial(pool_size, p) composition: members infected independently.
PoolCompositionDist independent_composition(int pool_size, double p);

/// Expectations for one pool, given its composition.
struct PoolExpectations {
  double tests = 0.0;
  double false_negatives = 0.0;
  double false_positives = 0.0;
};

PoolExpectations pool_expectations(const PoolCompositionDist& composition,
                                   const TestCharacteristics& tc);

double expected_tests(int pool_size, const TruncatedPrior& prior, const TestCharacteristics& tc);
double expected_false_negatives(int pool_size, const TruncatedPrior& prior,
                                const TestCharacteristics& tc);
double expected_false_positives(int pool_size, const TruncatedPrior& prior,
                                const TestCharacteristics& tc);

/// Per-pool-size expectations and penalized objective for s = 1..n_max.
///
/// Vectors are indexed by pool size; index 0 is unused and holds zero.
struct CostTable {
  int n_max = 0;
  std::vector<double> tests;
  std::vector<double> fneg;
  std::vector<double> fpos;
  std::vector<double> objective;
  PenaltyWeights weights;

  bool empty() const { return n_max < 1; }
  double g(int pool_size) const { return objective.at(static_cast<std::size_t>(pool_size)); }
};

/// Objective g(s) = E[tests] + l1 E[FN] + l2 E[FP] under the overdispersed prior.
CostTable build_cost_table(const ModelParams& params, const PenaltyWeights& weights);

/// As above for an arbitrary prior over the infected count.
CostTable build_cost_table(const TruncatedPrior& prior, const TestCharacteristics& tc,
                           const PenaltyWeights& weights);

/// Classical Dorfman costs: each contact infected independently with probability p.
CostTable build_cost_table_independent(int pool_max, double p, const TestCharacteristics& tc,
                                       const PenaltyWeights& weights);

}  // namespace pooltrace
