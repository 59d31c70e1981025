#include "pooltrace/cost.hpp"

#include <cmath>
#include <string>

#include "pooltrace/errors.hpp"

namespace pooltrace {

namespace {

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

void check_pool_size(int pool_size, int n_max) {
  if (pool_size < 1 || pool_size > n_max) {
    throw ParameterError("pool size " + std::to_string(pool_size) + " outside [1, " +
                         std::to_string(n_max) + "]");
  }
}

template <typename CompositionFn>
CostTable tabulate(int n_max, const TestCharacteristics& tc, const PenaltyWeights& weights,
                   CompositionFn&& composition) {
  tc.validate();
  weights.validate();
  CostTable table;
  table.n_max = n_max;
  table.weights = weights;
  const auto size = static_cast<std::size_t>(n_max) + 1;
  table.tests.assign(size, 0.0);
  table.fneg.assign(size, 0.0);
  table.fpos.assign(size, 0.0);
  table.objective.assign(size, 0.0);
  for (int s = 1; s <= n_max; ++s) {
    const auto e = pool_expectations(composition(s), tc);
    const auto i = static_cast<std::size_t>(s);
    table.tests[i] = e.tests;
    table.fneg[i] = e.false_negatives;
    table.fpos[i] = e.false_positives;
    table.objective[i] =
        e.tests + weights.false_negative * e.false_negatives + weights.false_positive * e.false_positives;
  }
  return table;
}

}  // namespace

void TestCharacteristics::validate() const {
  if (!is_probability(sensitivity) || !is_probability(specificity)) {
    throw ParameterError("sensitivity and specificity must lie in [0, 1]");
  }
}

void PenaltyWeights::validate() const {
  if (!(false_negative >= 0.0) || !(false_positive >= 0.0) || !std::isfinite(false_negative) ||
      !std::isfinite(false_positive)) {
    throw ParameterError("penalty weights must be finite and >= 0");
  }
}

void ModelParams::validate() const {
  if (contacts < 1) {
    throw ParameterError("number of contacts N must be >= 1");
  }
  negbin.validate();
  tests.validate();
}

PoolCompositionDist pool_composition(int pool_size, const TruncatedPrior& prior,
                                     const LogFactorialTable& log_factorials) {
  const int total = prior.n_max();
  check_pool_size(pool_size, total);
  PoolCompositionDist out;
  out.pool_size = pool_size;
  out.probs.assign(static_cast<std::size_t>(pool_size) + 1, 0.0);
  for (int j = 0; j <= pool_size; ++j) {
    double acc = 0.0;
    for (int n = j; n <= total; ++n) {
      const double q = prior.pmf(n);
      if (q == 0.0) {
        continue;
      }
      acc += log_factorials.hypergeom_pmf(j, n, pool_size, total) * q;
    }
    out.probs[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

PoolCompositionDist pool_composition(int pool_size, const TruncatedPrior& prior) {
  return pool_composition(pool_size, prior, LogFactorialTable(prior.n_max()));
}

PoolCompositionDist independent_composition(int pool_size, double p) {
  if (pool_size < 1) {
    throw ParameterError("pool size must be >= 1");
  }
  PoolCompositionDist out;
  out.pool_size = pool_size;
  out.probs.resize(static_cast<std::size_t>(pool_size) + 1);
  for (int j = 0; j <= pool_size; ++j) {
    out.probs[static_cast<std::size_t>(j)] = binom_pmf(j, pool_size, p);
  }
  return out;
}

PoolExpectations pool_expectations(const PoolCompositionDist& composition,
                                   const TestCharacteristics& tc) {
  const int s = composition.pool_size;
  const auto& probs = composition.probs;
  const double se = tc.sensitivity;
  const double sp = tc.specificity;
  PoolExpectations e;
  if (s == 1) {
    // A single contact is tested once; probs[1] = P(that contact is infected).
    e.tests = 1.0;
    e.false_negatives = (1.0 - se) * probs[1];
    e.false_positives = (1.0 - sp) * probs[0];
    return e;
  }

  double any_infected = 0.0;
  double fn = 0.0;
  double fp_mixed = 0.0;
  for (int j = 1; j <= s; ++j) {
    const double pj = probs[static_cast<std::size_t>(j)];
    any_infected += pj;
    fn += j * (1.0 - se * se) * pj;
    if (j < s) {
      fp_mixed += se * (s - j) * (1.0 - sp) * pj;
    }
  }
  e.tests = 1.0 + s * (1.0 - (1.0 - se) * any_infected - sp * probs[0]);
  e.false_negatives = fn;
  e.false_positives = (1.0 - sp) * (1.0 - sp) * s * probs[0] + fp_mixed;
  return e;
}

double expected_tests(int pool_size, const TruncatedPrior& prior, const TestCharacteristics& tc) {
  tc.validate();
  return pool_expectations(pool_composition(pool_size, prior), tc).tests;
}

double expected_false_negatives(int pool_size, const TruncatedPrior& prior,
                                const TestCharacteristics& tc) {
  tc.validate();
  return pool_expectations(pool_composition(pool_size, prior), tc).false_negatives;
}

double expected_false_positives(int pool_size, const TruncatedPrior& prior,
                                const TestCharacteristics& tc) {
  tc.validate();
  return pool_expectations(pool_composition(pool_size, prior), tc).false_positives;
}

CostTable build_cost_table(const TruncatedPrior& prior, const TestCharacteristics& tc,
                           const PenaltyWeights& weights) {
  const LogFactorialTable log_factorials(prior.n_max());
  return tabulate(prior.n_max(), tc, weights,
                  [&](int s) { return pool_composition(s, prior, log_factorials); });
}

CostTable build_cost_table(const ModelParams& params, const PenaltyWeights& weights) {
  params.validate();
  const auto prior = TruncatedPrior::build(params.negbin, params.contacts);
  return build_cost_table(prior, params.tests, weights);
}

CostTable build_cost_table_independent(int pool_max, double p, const TestCharacteristics& tc,
                                       const PenaltyWeights& weights) {
  if (pool_max < 1) {
    throw ParameterError("pool_max must be >= 1");
  }
  if (!is_probability(p)) {
    throw ParameterError("infection probability p must lie in [0, 1]");
  }
  return tabulate(pool_max, tc, weights, [&](int s) { return independent_composition(s, p); });
}

}  // namespace pooltrace
