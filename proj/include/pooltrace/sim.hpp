#pragma once

#include <cstdint>
#include <vector>

#include "pooltrace/cost.hpp"
#include "pooltrace/dist.hpp"
#include "pooltrace/optimizer.hpp"
#include "pooltrace/rng.hpp"

namespace pooltrace {

struct InfectionState {
  std::vector<bool> flags;  ///< flags[j]: contact j is infected
  int n_infected = 0;

  int contacts() const { return static_cast<int>(flags.size()); }
};

/// Draws the infected count from the prior, then infects a uniformly random
/// subset of that size (partial Fisher-Yates).
InfectionState sample_infection_state(const TruncatedPrior& prior, CounterRng& rng);

/// Outcome of testing one infection state with one design.
struct ReplicateRecord {
  int tests_used = 0;
  int false_negatives = 0;
  int false_positives = 0;

  friend bool operator==(const ReplicateRecord&, const ReplicateRecord&) = default;
};

/// Two-stage Dorfman testing with imperfect tests. Contacts fill the pools
/// in index order; a positive pool of size > 1 retests each member.
ReplicateRecord simulate_design(const PoolDesign& design, const InfectionState& state,
                                const TestCharacteristics& tc, CounterRng& rng);

/// Both methods evaluated on the same replicate.
struct PairedRun {
  ReplicateRecord ours;
  ReplicateRecord baseline;
  /// (baseline.tests - ours.tests) / baseline.tests; may be negative.
  double savings = 0.0;

  friend bool operator==(const PairedRun&, const PairedRun&) = default;
};

struct ExperimentOptions {
  int replicates = 100000;
  std::uint64_t seed = 0;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 1;
  /// When false, the baseline gets its own infection state per replicate.
  bool shared_state = true;
  /// When true both methods read test noise from the same stream (common
  /// random numbers), so identical designs on a shared state give identical
  /// records. When false each method has its own noise stream.
  bool common_noise = true;
};

/// Simulated and analytic performance of one design.
struct MethodSummary {
  PoolDesign design;
  double mean_pool_size = 0.0;

  // Analytic totals under the overdispersed model.
  double expected_tests = 0.0;
  double expected_false_negatives = 0.0;
  double expected_false_positives = 0.0;

  // Monte-Carlo estimates.
  double mean_tests = 0.0;
  double stderr_tests = 0.0;
  double mean_false_negatives = 0.0;
  double stderr_false_negatives = 0.0;
  double mean_false_positives = 0.0;
  double stderr_false_positives = 0.0;
  double tests_p5 = 0.0;
  double tests_p95 = 0.0;

  double mean_tests_per_contact = 0.0;
  double fn_rate = 0.0;  ///< mean false negatives per contact
  double fp_rate = 0.0;  ///< mean false positives per contact
};

/// Percentiles reported for the savings distribution.
inline constexpr int kSavingsPercentiles[] = {5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 95};

struct ExperimentSummary {
  MethodSummary ours;
  MethodSummary baseline;
  double mean_savings = 0.0;
  /// Nearest-rank quantiles, aligned with kSavingsPercentiles.
  std::vector<double> savings_quantiles;
  double fraction_negative_savings = 0.0;
};

struct PairedExperiment {
  std::vector<PairedRun> runs;
  ExperimentSummary summary;
};

/// Overdispersion-aware design and classical Dorfman design (independent
/// infections with p = E[n]/N) under the same weights.
struct DesignPair {
  TruncatedPrior prior;
  CostTable cost;           ///< overdispersed-model costs
  CostTable baseline_cost;  ///< independence-model costs
  PoolDesign ours;
  PoolDesign baseline;
};

DesignPair compute_designs(const ModelParams& params, const PenaltyWeights& weights);

/// Simulates both designs on `replicates` infection states. Output is
/// identical for any thread count.
PairedExperiment run_paired_experiment(const ModelParams& params, const PenaltyWeights& weights,
                                       const ExperimentOptions& options);

/// Nearest-rank percentile of an ascending-sorted sample, pct in (0, 100].
double nearest_rank(const std::vector<double>& sorted, double pct);

/// Analytic totals of `design` under `cost`.
PoolExpectations design_expectations(const PoolDesign& design, const CostTable& cost);

/// POOLTRACE_THREADS, or 0 (auto) when unset or empty.
int threads_from_env();

}  // namespace pooltrace
