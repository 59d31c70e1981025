#include "pooltrace/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>

#include "pooltrace/errors.hpp"

namespace pooltrace {

namespace {

enum StreamTag : std::uint64_t {
  kStateStream = 1,
  kOursNoiseStream = 2,
  kBaselineNoiseStream = 3,
  kBaselineStateStream = 4,
};

struct Moments {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

template <typename Get>
Moments moments(const std::vector<PairedRun>& runs, Get&& get) {
  const auto n = static_cast<double>(runs.size());
  double sum = 0.0;
  for (const auto& run : runs) {
    sum += get(run);
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& run : runs) {
    const double d = get(run) - mean;
    ss += d * d;
  }
  const double var = runs.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

template <typename Pick>
MethodSummary summarize(const PoolDesign& design, const CostTable& true_cost,
                        const std::vector<PairedRun>& runs, Pick&& pick) {
  MethodSummary s;
  s.design = design;
  s.mean_pool_size = design.mean_pool_size();
  const auto expected = design_expectations(design, true_cost);
  s.expected_tests = expected.tests;
  s.expected_false_negatives = expected.false_negatives;
  s.expected_false_positives = expected.false_positives;

  const auto tests = moments(runs, [&](const PairedRun& r) { return double(pick(r).tests_used); });
  const auto fn = moments(runs, [&](const PairedRun& r) { return double(pick(r).false_negatives); });
  const auto fp = moments(runs, [&](const PairedRun& r) { return double(pick(r).false_positives); });
  s.mean_tests = tests.mean;
  s.stderr_tests = tests.stderr_mean;
  s.mean_false_negatives = fn.mean;
  s.stderr_false_negatives = fn.stderr_mean;
  s.mean_false_positives = fp.mean;
  s.stderr_false_positives = fp.stderr_mean;

  std::vector<double> sorted;
  sorted.reserve(runs.size());
  for (const auto& r : runs) {
    sorted.push_back(pick(r).tests_used);
  }
  std::sort(sorted.begin(), sorted.end());
  s.tests_p5 = nearest_rank(sorted, 5.0);
  s.tests_p95 = nearest_rank(sorted, 95.0);

  const double contacts = design.total;
  s.mean_tests_per_contact = s.mean_tests / contacts;
  s.fn_rate = s.mean_false_negatives / contacts;
  s.fp_rate = s.mean_false_positives / contacts;
  return s;
}

int resolve_threads(int requested, int replicates) {
  int threads = requested;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  return std::clamp(threads, 1, std::max(1, replicates));
}

}  // namespace

InfectionState sample_infection_state(const TruncatedPrior& prior, CounterRng& rng) {
  const int contacts = prior.n_max();
  const int infected = prior.sample(rng);
  InfectionState state;
  state.flags.assign(static_cast<std::size_t>(contacts), false);
  state.n_infected = infected;
  if (infected == contacts) {
    std::fill(state.flags.begin(), state.flags.end(), true);
    return state;
  }
  std::vector<int> order(static_cast<std::size_t>(contacts));
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < infected; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(contacts - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    state.flags[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
  }
  return state;
}

ReplicateRecord simulate_design(const PoolDesign& design, const InfectionState& state,
                                const TestCharacteristics& tc, CounterRng& rng) {
  const long assigned = std::accumulate(design.sizes.begin(), design.sizes.end(), 0L);
  if (assigned != state.contacts() || design.total != state.contacts()) {
    throw ParameterError("design covers " + std::to_string(assigned) + " contacts but state has " +
                         std::to_string(state.contacts()));
  }
  const double se = tc.sensitivity;
  const double false_pos = 1.0 - tc.specificity;
  auto test = [&](bool infected) { return rng.bernoulli(infected ? se : false_pos); };

  ReplicateRecord rec;
  std::size_t first = 0;
  for (int size : design.sizes) {
    const std::size_t last = first + static_cast<std::size_t>(size);
    bool any_infected = false;
    for (std::size_t j = first; j < last; ++j) {
      any_infected = any_infected || state.flags[j];
    }

    bool pool_positive = true;
    if (size > 1) {
      ++rec.tests_used;
      pool_positive = test(any_infected);
    }
    for (std::size_t j = first; j < last; ++j) {
      const bool infected = state.flags[j];
      bool marked = false;
      if (pool_positive) {
        ++rec.tests_used;
        marked = test(infected);
      }
      if (infected && !marked) {
        ++rec.false_negatives;
      } else if (!infected && marked) {
        ++rec.false_positives;
      }
    }
    first = last;
  }
  return rec;
}

double nearest_rank(const std::vector<double>& sorted, double pct) {
  if (sorted.empty()) {
    throw ParameterError("nearest_rank of an empty sample");
  }
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

PoolExpectations design_expectations(const PoolDesign& design, const CostTable& cost) {
  PoolExpectations total;
  for (int s : design.sizes) {
    const auto i = static_cast<std::size_t>(s);
    total.tests += cost.tests.at(i);
    total.false_negatives += cost.fneg.at(i);
    total.false_positives += cost.fpos.at(i);
  }
  return total;
}

DesignPair compute_designs(const ModelParams& params, const PenaltyWeights& weights) {
  params.validate();
  weights.validate();
  auto prior = TruncatedPrior::build(params.negbin, params.contacts);
  auto cost = build_cost_table(prior, params.tests, weights);
  const double p = std::clamp(prior.mean() / params.contacts, 0.0, 1.0);
  auto baseline_cost = build_cost_table_independent(params.contacts, p, params.tests, weights);
  auto ours = optimal_design(cost);
  auto baseline = optimal_design(baseline_cost);
  return DesignPair{std::move(prior), std::move(cost), std::move(baseline_cost), std::move(ours),
                    std::move(baseline)};
}

PairedExperiment run_paired_experiment(const ModelParams& params, const PenaltyWeights& weights,
                                       const ExperimentOptions& options) {
  if (options.replicates < 1) {
    throw ParameterError("replicates must be >= 1");
  }
  const auto designs = compute_designs(params, weights);
  const auto& tc = params.tests;

  PairedExperiment out;
  out.runs.resize(static_cast<std::size_t>(options.replicates));

  auto run_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const auto index = static_cast<std::uint64_t>(i);
      auto state_rng = CounterRng::stream(options.seed, kStateStream, index);
      auto ours_rng = CounterRng::stream(options.seed, kOursNoiseStream, index);
      auto base_rng = CounterRng::stream(
          options.seed, options.common_noise ? kOursNoiseStream : kBaselineNoiseStream, index);
      const auto state = sample_infection_state(designs.prior, state_rng);
      PairedRun run;
      run.ours = simulate_design(designs.ours, state, tc, ours_rng);
      if (options.shared_state) {
        run.baseline = simulate_design(designs.baseline, state, tc, base_rng);
      } else {
        auto other_rng = CounterRng::stream(options.seed, kBaselineStateStream, index);
        const auto other = sample_infection_state(designs.prior, other_rng);
        run.baseline = simulate_design(designs.baseline, other, tc, base_rng);
      }
      run.savings = static_cast<double>(run.baseline.tests_used - run.ours.tests_used) /
                    static_cast<double>(run.baseline.tests_used);
      out.runs[static_cast<std::size_t>(i)] = run;
    }
  };

  const int threads = resolve_threads(options.threads, options.replicates);
  if (threads == 1) {
    run_range(0, options.replicates);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    const int chunk = (options.replicates + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(options.replicates, begin + chunk);
      if (begin < end) {
        workers.emplace_back(run_range, begin, end);
      }
    }
  }

  auto& summary = out.summary;
  summary.ours = summarize(designs.ours, designs.cost, out.runs,
                           [](const PairedRun& r) -> const ReplicateRecord& { return r.ours; });
  summary.baseline = summarize(designs.baseline, designs.cost, out.runs,
                               [](const PairedRun& r) -> const ReplicateRecord& { return r.baseline; });

  std::vector<double> savings;
  savings.reserve(out.runs.size());
  double total = 0.0;
  std::size_t negative = 0;
  for (const auto& run : out.runs) {
    savings.push_back(run.savings);
    total += run.savings;
    negative += run.savings < 0.0 ? 1 : 0;
  }
  summary.mean_savings = total / static_cast<double>(savings.size());
  summary.fraction_negative_savings = static_cast<double>(negative) / static_cast<double>(savings.size());
  std::sort(savings.begin(), savings.end());
  for (int pct : kSavingsPercentiles) {
    summary.savings_quantiles.push_back(nearest_rank(savings, pct));
  }
  return out;
}

int threads_from_env() {
  const char* raw = std::getenv("POOLTRACE_THREADS");
  if (raw == nullptr || *raw == '\0') {
    return 0;
  }
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (*end != '\0' || value < 0 || value > 4096) {
    throw ParameterError(std::string("POOLTRACE_THREADS must be a non-negative integer, got '") + raw + "'");
  }
  return static_cast<int>(value);
}

}  // namespace pooltrace
