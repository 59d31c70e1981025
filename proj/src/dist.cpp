#include "pooltrace/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pooltrace/errors.hpp"

namespace pooltrace {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// ln(1e-300); a smaller truncation normalizer means r >> N.
const double kLogUnderflow = std::log(1e-300);

void check_pmf_args(int s_inf, int n_inf, int pool, int total) {
  if (s_inf < 0 || pool < s_inf || total < pool || n_inf < 0 || n_inf > total) {
    throw ParameterError("hypergeom_pmf: arguments out of range (s_inf=" + std::to_string(s_inf) +
                         ", n_inf=" + std::to_string(n_inf) + ", pool=" + std::to_string(pool) +
                         ", total=" + std::to_string(total) + ")");
  }
}

}  // namespace

double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

void NegBinParams::validate() const {
  if (!std::isfinite(k) || k <= 0.0) {
    throw ParameterError("dispersion k must be finite and > 0, got " + std::to_string(k));
  }
  if (!std::isfinite(r) || r < 0.0) {
    throw ParameterError("reproduction number r must be finite and >= 0, got " + std::to_string(r));
  }
}

double negbinom_log_pmf(int n, const NegBinParams& params) {
  params.validate();
  if (n < 0) {
    throw ParameterError("negbinom_log_pmf: n must be >= 0");
  }
  if (params.r == 0.0) {
    return n == 0 ? 0.0 : kNegInf;
  }
  const double k = params.k;
  const double r = params.r;
  // ln p = ln r - ln(k + r); ln(1 - p) = -ln(1 + r/k).
  const double log_p = std::log(r) - std::log(k + r);
  const double log_q = -std::log1p(r / k);
  const double log_coef = log_gamma(n + k) - log_gamma(k) - log_gamma(n + 1.0);
  return log_coef + n * log_p + k * log_q;
}

TruncatedPrior::TruncatedPrior(std::vector<double> pmf, std::optional<NegBinParams> params)
    : pmf_(std::move(pmf)), params_(params) {
  cdf_.resize(pmf_.size());
  double running = 0.0;
  double mean = 0.0;
  for (std::size_t n = 0; n < pmf_.size(); ++n) {
    running += pmf_[n];
    cdf_[n] = running;
    mean += static_cast<double>(n) * pmf_[n];
  }
  mean_ = mean;
  double var = 0.0;
  for (std::size_t n = 0; n < pmf_.size(); ++n) {
    const double d = static_cast<double>(n) - mean_;
    var += d * d * pmf_[n];
  }
  variance_ = var;
  // Pin the CDF to 1 from the last supported value on, so rounding never
  // lets a zero-probability tail value be drawn.
  std::size_t last = pmf_.size() - 1;
  while (last > 0 && pmf_[last] == 0.0) {
    --last;
  }
  std::fill(cdf_.begin() + static_cast<std::ptrdiff_t>(last), cdf_.end(), 1.0);
}

TruncatedPrior TruncatedPrior::build(const NegBinParams& params, int n_max) {
  params.validate();
  if (n_max < 1) {
    throw ParameterError("truncation point N must be >= 1, got " + std::to_string(n_max));
  }
  const auto size = static_cast<std::size_t>(n_max) + 1;
  std::vector<double> pmf(size, 0.0);
  if (params.r == 0.0) {
    pmf[0] = 1.0;
    return TruncatedPrior(std::move(pmf), params);
  }

  std::vector<double> log_pmf(size);
  for (int n = 0; n <= n_max; ++n) {
    log_pmf[static_cast<std::size_t>(n)] = negbinom_log_pmf(n, params);
  }
  const double max_log = *std::max_element(log_pmf.begin(), log_pmf.end());
  double sum = 0.0;
  for (std::size_t n = 0; n < size; ++n) {
    pmf[n] = std::exp(log_pmf[n] - max_log);
    sum += pmf[n];
  }
  const double log_normalizer = max_log + std::log(sum);
  if (!(log_normalizer >= kLogUnderflow)) {
    throw NumericError("P(X <= N) underflows 1e-300 (r=" + std::to_string(params.r) +
                       ", k=" + std::to_string(params.k) + ", N=" + std::to_string(n_max) + ")");
  }
  for (double& v : pmf) {
    v /= sum;
  }
  return TruncatedPrior(std::move(pmf), params);
}

TruncatedPrior TruncatedPrior::from_pmf(std::vector<double> pmf) {
  if (pmf.size() < 2) {
    throw ParameterError("prior needs at least two support points (N >= 1)");
  }
  double sum = 0.0;
  for (double v : pmf) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ParameterError("prior pmf entries must be finite and non-negative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw ParameterError("prior pmf must sum to 1, got " + std::to_string(sum));
  }
  return TruncatedPrior(std::move(pmf), std::nullopt);
}

int TruncatedPrior::sample(CounterRng& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), n_max()));
}

LogFactorialTable::LogFactorialTable(int n_max) {
  if (n_max < 0) {
    throw ParameterError("log-factorial table size must be >= 0");
  }
  table_.resize(static_cast<std::size_t>(n_max) + 1);
  table_[0] = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    table_[static_cast<std::size_t>(n)] = table_[static_cast<std::size_t>(n) - 1] + std::log(static_cast<double>(n));
  }
}

double LogFactorialTable::log_choose(int n, int m) const {
  if (m < 0 || m > n) {
    return kNegInf;
  }
  return log_factorial(n) - log_factorial(m) - log_factorial(n - m);
}

double LogFactorialTable::hypergeom_pmf(int s_inf, int n_inf, int pool, int total) const {
  check_pmf_args(s_inf, n_inf, pool, total);
  if (total > n_max()) {
    throw ParameterError("hypergeom_pmf: total exceeds log-factorial table");
  }
  if (s_inf > n_inf || pool - s_inf > total - n_inf) {
    return 0.0;
  }
  return std::exp(log_choose(n_inf, s_inf) + log_choose(total - n_inf, pool - s_inf) -
                  log_choose(total, pool));
}

double hypergeom_pmf(int s_inf, int n_inf, int pool, int total) {
  check_pmf_args(s_inf, n_inf, pool, total);
  return LogFactorialTable(total).hypergeom_pmf(s_inf, n_inf, pool, total);
}

double binom_pmf(int s_inf, int pool, double p) {
  if (pool < 0 || s_inf < 0 || s_inf > pool) {
    throw ParameterError("binom_pmf: need 0 <= s_inf <= pool");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("binom_pmf: p must lie in [0, 1]");
  }
  if (p == 0.0) {
    return s_inf == 0 ? 1.0 : 0.0;
  }
  if (p == 1.0) {
    return s_inf == pool ? 1.0 : 0.0;
  }
  const double log_choose = log_gamma(pool + 1.0) - log_gamma(s_inf + 1.0) - log_gamma(pool - s_inf + 1.0);
  return std::exp(log_choose + s_inf * std::log(p) + (pool - s_inf) * std::log1p(-p));
}

}  // namespace pooltrace
