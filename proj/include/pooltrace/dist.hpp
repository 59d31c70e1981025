#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pooltrace/rng.hpp"

namespace pooltrace {

/// Negative binomial parameterized by its mean r and dispersion k.
///
/// Success probability is p = r / (k + r); small k means heavy overdispersion
/// (Var = r (1 + r/k)), k -> infinity recovers Poisson(r).
struct NegBinParams {
  double r = 0.0;
  double k = 1.0;

  /// Throws ParameterError unless k > 0, r >= 0 and both are finite.
  void validate() const;
  double success_probability() const { return r / (k + r); }
};

/// log P(X = n) for X ~ NBin(k, r/(k+r)). Returns -inf outside the support.
double negbinom_log_pmf(int n, const NegBinParams& params);

/// Distribution of the number of infected contacts, P(X = n | X <= N).
class TruncatedPrior {
 public:
  /// Prior obtained by truncating NBin(r, k) to {0, ..., n_max}.
  static TruncatedPrior build(const NegBinParams& params, int n_max);

  /// Prior over {0, ..., pmf.size() - 1} given directly (e.g. a binomial
  /// count); pmf must be non-negative and sum to 1 within 1e-10.
  static TruncatedPrior from_pmf(std::vector<double> pmf);

  int n_max() const { return static_cast<int>(pmf_.size()) - 1; }
  std::span<const double> pmf() const { return pmf_; }
  double pmf(int n) const { return pmf_.at(static_cast<std::size_t>(n)); }
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  /// Empty when constructed from an explicit pmf.
  const std::optional<NegBinParams>& params() const { return params_; }

  /// Inverse-CDF draw in [0, n_max].
  int sample(CounterRng& rng) const;

 private:
  explicit TruncatedPrior(std::vector<double> pmf, std::optional<NegBinParams> params);

  std::vector<double> pmf_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  std::optional<NegBinParams> params_;
};

inline TruncatedPrior build_truncated_prior(const NegBinParams& params, int n_max) {
  return TruncatedPrior::build(params, n_max);
}

inline int sample_truncated(const TruncatedPrior& prior, CounterRng& rng) {
  return prior.sample(rng);
}

/// ln(n!) for n = 0..n_max, used for every binomial coefficient.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(int n_max);

  int n_max() const { return static_cast<int>(table_.size()) - 1; }
  double log_factorial(int n) const { return table_[static_cast<std::size_t>(n)]; }
  /// ln C(n, m); -inf when m < 0 or m > n.
  double log_choose(int n, int m) const;

  /// Hypergeometric P(s_inf infected in a pool of size `pool` drawn from
  /// `total` contacts of which n_inf are infected). Zero off-support.
  double hypergeom_pmf(int s_inf, int n_inf, int pool, int total) const;

 private:
  std::vector<double> table_;
};

/// C(n_inf, s_inf) C(total - n_inf, pool - s_inf) / C(total, pool).
double hypergeom_pmf(int s_inf, int n_inf, int pool, int total);

/// C(pool, s_inf) p^s_inf (1 - p)^(pool - s_inf).
double binom_pmf(int s_inf, int pool, double p);

/// Thread-safe log-gamma for positive arguments.
double log_gamma(double x);

}  // namespace pooltrace
