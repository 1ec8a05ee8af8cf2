#include "ifrci/binom.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ifrci/errors.hpp"

namespace ifrci {

namespace {

constexpr double kRootTol = 1e-10;  // Clopper-Pearson bisection tolerance

void check_params(const BinomParams& b) {
  if (b.n < 0) throw std::domain_error("binom: n must be >= 0");
  if (!(b.p >= 0.0 && b.p <= 1.0)) throw std::domain_error("binom: p must be in [0,1]");
}

long long mode_of(long long n, double p) {
  long long m = static_cast<long long>(std::floor((static_cast<double>(n) + 1.0) * p));
  if (m < 0) m = 0;
  if (m > n) m = n;
  return m;
}

// sum_{i=0..k} pmf(i), valid for k at or below the mode so terms grow
// toward i = k. All terms positive; truncated at relative 1e-20.
double lower_tail(long long k, long long n, double p) {
  double scaled = 1.0;
  double term = 1.0;
  for (long long i = k; i >= 1; --i) {
    term *= static_cast<double>(i) * (1.0 - p) / (static_cast<double>(n - i + 1) * p);
    scaled += term;
    if (term < 1e-20 * scaled) break;
  }
  return binom_pmf(k, {n, p}) * scaled;
}

// sum_{i=k..n} pmf(i), valid for k at or above the mode.
double upper_tail(long long k, long long n, double p) {
  double scaled = 1.0;
  double term = 1.0;
  for (long long i = k; i < n; ++i) {
    term *= static_cast<double>(n - i) * p / (static_cast<double>(i + 1) * (1.0 - p));
    scaled += term;
    if (term < 1e-20 * scaled) break;
  }
  return binom_pmf(k, {n, p}) * scaled;
}

}  // namespace

double Interval::width() const {
  if (unbounded_upper) return std::numeric_limits<double>::infinity();
  return upper - lower;
}

double binom_pmf(long long k, const BinomParams& params) {
  check_params(params);
  const long long n = params.n;
  const double p = params.p;
  if (k < 0 || k > n) throw std::domain_error("binom_pmf: k out of [0, n]");
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  if (k == 0) return std::exp(static_cast<double>(n) * std::log1p(-p));
  if (k == n) return std::exp(static_cast<double>(n) * std::log(p));
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double log_pmf = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
                         std::lgamma(nd - kd + 1.0) + kd * std::log(p) +
                         (nd - kd) * std::log1p(-p);
  return std::exp(log_pmf);
}

double binom_cdf(long long k, const BinomParams& params) {
  check_params(params);
  const long long n = params.n;
  const double p = params.p;
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;  // X = 0 <= k
  if (p == 1.0) return 0.0;  // X = n > k
  const long long m = mode_of(n, p);
  if (k < m) return lower_tail(k, n, p);
  return 1.0 - upper_tail(k + 1, n, p);
}

double binom_sf(long long k, const BinomParams& params) {
  check_params(params);
  const long long n = params.n;
  const double p = params.p;
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p == 0.0) return 0.0;  // X = 0 < k
  if (p == 1.0) return 1.0;  // X = n >= k
  const long long m = mode_of(n, p);
  if (k > m) return upper_tail(k, n, p);
  return 1.0 - lower_tail(k - 1, n, p);
}

Interval clopper_pearson(long long k, long long n, double level) {
  if (n < 0 || k < 0 || k > n) throw std::domain_error("clopper_pearson: k out of [0, n]");
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("clopper_pearson: level must be in (0,1)");
  const double a2 = 0.5 * (1.0 - level);

  double lower = 0.0;
  if (k > 0) {
    if (k == n) {
      lower = std::pow(a2, 1.0 / static_cast<double>(n));
    } else {
      // P(Bin(n,p) >= k) grows from 0 to 1 in p; find where it crosses a2.
      double lo = 0.0, hi = 1.0;
      while (hi - lo > kRootTol) {
        double mid = 0.5 * (lo + hi);
        if (binom_sf(k, {n, mid}) < a2) lo = mid; else hi = mid;
      }
      lower = 0.5 * (lo + hi);
    }
  }

  double upper = 1.0;
  if (k < n) {
    if (k == 0) {
      upper = 1.0 - std::pow(a2, 1.0 / static_cast<double>(n));
    } else {
      // P(Bin(n,p) <= k) falls from 1 to 0 in p.
      double lo = 0.0, hi = 1.0;
      while (hi - lo > kRootTol) {
        double mid = 0.5 * (lo + hi);
        if (binom_cdf(k, {n, mid}) > a2) lo = mid; else hi = mid;
      }
      upper = 0.5 * (lo + hi);
    }
  }
  return {lower, upper, false};
}

}  // namespace ifrci
