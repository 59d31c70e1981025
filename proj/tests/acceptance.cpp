// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pooltrace/cli.hpp"
#include "pooltrace/cost.hpp"
#include "pooltrace/dist.hpp"
#include "pooltrace/optimizer.hpp"
#include "pooltrace/sim.hpp"

using namespace pooltrace;

namespace {

constexpr int kReplicates = 100000;
constexpr std::uint64_t kSeed = 20201;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
    }
    detail += (detail.empty() ? "" : "; ") + std::string(ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ModelParams fig_params(int n, double k = 0.1, double accuracy = 0.95) {
  return ModelParams{n, NegBinParams{2.5, k}, TestCharacteristics{accuracy, accuracy}};
}

ExperimentOptions experiment_options() {
  ExperimentOptions options;
  options.replicates = kReplicates;
  options.seed = kSeed;
  options.threads = 0;
  return options;
}

// 1. DP optimality against exhaustive enumeration.
Verdict dp_optimality() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int cells = 0;
  for (int n = 1; n <= 12; ++n) {
    for (double r : {0.5, 2.5, 5.0}) {
      for (double k : {0.1, 1.0, 10.0}) {
        for (double acc : {0.75, 0.95}) {
          for (auto [l1, l2] : {std::pair{0.0, 0.0}, std::pair{5.0, 0.0}, std::pair{0.0, 5.0}}) {
            const auto cost = build_cost_table(ModelParams{n, {r, k}, {acc, acc}}, {l1, l2});
            const auto dp = optimal_design(cost);
            const auto bf = brute_force_design(cost);
            worst = std::max(worst, std::abs(dp.objective_value - bf.objective_value));
            ++cells;
          }
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  v.require(cells == 12 * 54, fmt("%g cells", cells));
  v.require(worst <= 1e-9, fmt("max |DP - brute force| = %.3g (tol 1e-9)", worst));
  v.require(elapsed < 10.0, fmt("runtime %.2fs (limit 10s)", elapsed));
  return v;
}

std::vector<double> truncated_poisson(double r, int n_max) {
  std::vector<double> pmf(static_cast<std::size_t>(n_max) + 1);
  pmf[0] = std::exp(-r);
  double sum = pmf[0];
  for (int n = 1; n <= n_max; ++n) {
    pmf[n] = pmf[n - 1] * r / n;
    sum += pmf[n];
  }
  for (double& x : pmf) x /= sum;
  return pmf;
}

// 2. Truncated prior normalization and Poisson limit.
Verdict distribution_correctness() {
  Verdict v;
  double worst = 0.0;
  for (double r : {0.5, 2.5, 5.0}) {
    for (double k : {0.05, 0.1, 1.0, 10.0}) {
      for (int n : {20, 100, 200}) {
        const auto prior = build_truncated_prior({r, k}, n);
        double sum = 0.0;
        for (double x : prior.pmf()) sum += x;
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
  }
  v.require(worst <= 1e-12, fmt("max |sum pmf - 1| = %.3g (tol 1e-12)", worst));
  const auto prior = build_truncated_prior({2.5, 1e6}, 200);
  const auto poisson = truncated_poisson(2.5, 200);
  double tv = 0.0;
  for (int n = 0; n <= 200; ++n) tv += std::abs(prior.pmf(n) - poisson[n]);
  tv *= 0.5;
  v.require(tv <= 1e-3, fmt("TV to Poisson(2.5) at k=1e6 = %.3g (tol 1e-3)", tv));
  return v;
}

// 3. Monte-Carlo means against analytic sums.
Verdict analytic_simulation_agreement() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const auto exp = run_paired_experiment(fig_params(20), {}, experiment_options());
  const double elapsed = seconds_since(start);
  for (const auto& [name, m] : {std::pair{"ours", &exp.summary.ours}, std::pair{"dorfman", &exp.summary.baseline}}) {
    const double rel = std::abs(m->mean_tests - m->expected_tests) / m->expected_tests;
    v.require(rel <= 0.005, std::string(name) + fmt(" tests rel err %.4f (tol 0.005)", rel));
    const double zfn = std::abs(m->mean_false_negatives - m->expected_false_negatives) / m->stderr_false_negatives;
    const double zfp = std::abs(m->mean_false_positives - m->expected_false_positives) / m->stderr_false_positives;
    v.require(zfn <= 3.0, std::string(name) + fmt(" FN %.2f se", zfn));
    v.require(zfp <= 3.0, std::string(name) + fmt(" FP %.2f se", zfp));
  }
  v.require(elapsed < 30.0, fmt("runtime %.2fs (limit 30s)", elapsed));
  return v;
}

// 4. Behaviour across the number of contacts (fig1 preset).
Verdict contact_count_sweep() {
  Verdict v;
  const std::vector<int> ns = {5, 10, 20, 50, 100, 200};
  std::map<int, ExperimentSummary> summaries;
  std::vector<double> savings_n20;
  for (int n : ns) {
    auto exp = run_paired_experiment(fig_params(n), {}, experiment_options());
    if (n == 20) {
      for (const auto& run : exp.runs) savings_n20.push_back(run.savings);
    }
    summaries[n] = exp.summary;
  }

  bool never_worse = true;
  std::string per_n;
  for (int n : ns) {
    const auto& s = summaries[n];
    never_worse = never_worse && s.ours.mean_tests_per_contact <= s.baseline.mean_tests_per_contact;
    per_n += fmt(" N=%g:%.4f/%.4f", n, s.ours.mean_tests_per_contact, s.baseline.mean_tests_per_contact);
  }
  v.require(never_worse, "(a) ours <= dorfman tests/contact at every N [" + per_n + " ]");
  v.require(summaries[20].ours.mean_tests_per_contact < summaries[20].baseline.mean_tests_per_contact,
            "(a) strictly lower at N=20");

  bool baseline_grows = true;
  double ours_min = 1e300, ours_max = 0.0;
  std::string sizes;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& s = summaries[ns[i]];
    if (i > 0) baseline_grows = baseline_grows && s.baseline.mean_pool_size >= summaries[ns[i - 1]].baseline.mean_pool_size;
    ours_min = std::min(ours_min, s.ours.mean_pool_size);
    ours_max = std::max(ours_max, s.ours.mean_pool_size);
    sizes += fmt(" N=%g:%.2f/%.2f", ns[i], s.ours.mean_pool_size, s.baseline.mean_pool_size);
  }
  baseline_grows = baseline_grows && summaries[200].baseline.mean_pool_size > summaries[5].baseline.mean_pool_size;
  v.require(baseline_grows, "(b) dorfman mean pool size increases with N [" + sizes + " ]");
  v.require(ours_max / ours_min < 2.0, fmt("(b) ours pool size ratio max/min = %.2f (limit < 2)", ours_max / ours_min));

  std::map<int, int> bins;
  int negative = 0;
  for (double s : savings_n20) {
    ++bins[static_cast<int>(std::floor(s * 10.0 + 1e-9))];
    negative += s < 0.0 ? 1 : 0;
  }
  const auto mode = std::max_element(bins.begin(), bins.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  const int lower = mode->first * 10;
  v.require(lower >= 40 && lower + 10 <= 60,
            fmt("(c) modal savings bin at N=20 = [%g%%, %g%%) holding %.1f%% (want within [40%%, 60%%])", lower,
                lower + 10, 100.0 * mode->second / savings_n20.size()));
  v.require(negative > 0, fmt("(c) share of negative savings at N=20 = %.4f (want > 0)",
                              static_cast<double>(negative) / savings_n20.size()));
  return v;
}

// 5. Overdispersion gives the larger advantage.
Verdict dispersion_advantage() {
  Verdict v;
  const auto high = run_paired_experiment(fig_params(100, 0.05), {}, experiment_options());
  const auto low = run_paired_experiment(fig_params(100, 10.0), {}, experiment_options());
  v.require(high.summary.mean_savings > low.summary.mean_savings,
            fmt("mean savings k=0.05: %.4f vs k=10: %.4f", high.summary.mean_savings, low.summary.mean_savings));
  return v;
}

// 6. Penalty sweeps at N = 100.
Verdict penalty_sweeps() {
  Verdict v;
  const auto params = fig_params(100);
  const auto prior = build_truncated_prior(params.negbin, params.contacts);
  const auto unweighted = build_cost_table(prior, params.tests, {});

  std::set<std::vector<int>> fn_designs;
  double prev_tests = -1.0, prev_fn = 1e300;
  bool tests_up = true, fn_down = true;
  for (double l1 : {0.0, 1.0, 5.0, 25.0, 125.0}) {
    const auto design = optimal_design(build_cost_table(prior, params.tests, {l1, 0.0}));
    const auto e = design_expectations(design, unweighted);
    tests_up = tests_up && e.tests >= prev_tests - 1e-12;
    fn_down = fn_down && e.false_negatives <= prev_fn + 1e-12;
    prev_tests = e.tests;
    prev_fn = e.false_negatives;
    fn_designs.insert(design.sizes);
  }
  v.require(tests_up, "lambda1 sweep: expected tests non-decreasing");
  v.require(fn_down, "lambda1 sweep: expected FN non-increasing");
  v.require(fn_designs.size() <= 4, fmt("lambda1 sweep: %g distinct designs (limit 4)", fn_designs.size()));

  std::set<std::vector<int>> fp_designs;
  double prev_size = 1e300, last_size = 0.0;
  bool size_down = true;
  std::string trail;
  for (double l2 : {0.0, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 125.0, 1000.0}) {
    const auto design = optimal_design(build_cost_table(prior, params.tests, {0.0, l2}));
    const double size = design.mean_pool_size();
    size_down = size_down && size <= prev_size;
    prev_size = last_size = size;
    fp_designs.insert(design.sizes);
    trail += fmt(" %.2f", size);
  }
  v.require(fp_designs.size() >= 4, fmt("lambda2 sweep: %g distinct designs (need >= 4)", fp_designs.size()));
  v.require(size_down && std::abs(last_size - 2.0) < 1e-12,
            "lambda2 sweep: mean pool size decreasing to 2 [" + trail + " ]");
  return v;
}

// 7. E[FN(s)] is linear in s for pooled tests.
Verdict fn_linearity() {
  Verdict v;
  double worst = 0.0;
  for (int n : {20, 100, 200}) {
    for (double k : {0.05, 0.1, 1.0, 10.0}) {
      for (double se : {0.75, 0.85, 0.95}) {
        const auto prior = build_truncated_prior({2.5, k}, n);
        const auto table = build_cost_table(prior, {se, 0.9}, {});
        for (int s = 2; s <= n; ++s) {
          const double linear = (1.0 - se * se) * s * prior.mean() / n;
          worst = std::max(worst, std::abs(table.fneg[s] - linear));
        }
      }
    }
  }
  v.require(worst <= 1e-12, fmt("max deviation %.3g (tol 1e-12)", worst));
  return v;
}

// 8. Binomial prior through the hypergeometric mixture equals the independent baseline.
Verdict baseline_cross_check() {
  Verdict v;
  double worst = 0.0;
  for (int n = 1; n <= 50; ++n) {
    const double p_model = build_truncated_prior({2.5, 0.1}, n).mean() / n;
    for (double p : {p_model, 0.01, 0.1, 0.3, 0.5}) {
      std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
      for (int j = 0; j <= n; ++j) pmf[j] = binom_pmf(j, n, p);
      const TestCharacteristics tc{0.95, 0.95};
      const PenaltyWeights w{5.0, 5.0};
      const auto mixed = build_cost_table(TruncatedPrior::from_pmf(pmf), tc, w);
      const auto direct = build_cost_table_independent(n, p, tc, w);
      for (int s = 1; s <= n; ++s) {
        worst = std::max({worst, std::abs(mixed.tests[s] - direct.tests[s]), std::abs(mixed.fneg[s] - direct.fneg[s]),
                          std::abs(mixed.fpos[s] - direct.fpos[s]),
                          std::abs(mixed.objective[s] - direct.objective[s])});
      }
    }
  }
  v.require(worst <= 1e-10, fmt("max deviation %.3g (tol 1e-10)", worst));
  return v;
}

std::string run_fig1_sweep(const char* threads, int& code) {
  ::setenv("POOLTRACE_THREADS", threads, 1);
  std::ostringstream out, err;
  code = cli::run({"sweep", "--preset", "fig1", "--seed", "7"}, out, err);
  ::unsetenv("POOLTRACE_THREADS");
  return out.str();
}

// 9. Byte-identical sweep output.
Verdict determinism() {
  Verdict v;
  int c1 = 0, c2 = 0, c8 = 0;
  const auto first = run_fig1_sweep("1", c1);
  const auto second = run_fig1_sweep("1", c2);
  const auto eight = run_fig1_sweep("8", c8);
  v.require(c1 == 0 && c2 == 0 && c8 == 0, "sweep exit status 0");
  v.require(!first.empty() && first == second, fmt("two runs identical (%g bytes)", first.size()));
  v.require(first == eight, "POOLTRACE_THREADS=1 and 8 identical");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 DP optimality vs brute force", dp_optimality},
      {"2 distribution correctness", distribution_correctness},
      {"3 analytic-simulation agreement", analytic_simulation_agreement},
      {"4 contact-count sweep", contact_count_sweep},
      {"5 overdispersion advantage", dispersion_advantage},
      {"6 penalty sweeps", penalty_sweeps},
      {"7 FN linearity", fn_linearity},
      {"8 baseline cross-check", baseline_cross_check},
      {"9 sweep determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += v.pass ? 0 : 1;
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
