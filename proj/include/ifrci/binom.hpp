#pragma once

namespace ifrci {

struct BinomParams {
  long long n = 0;  // trial count, n >= 0
  double p = 0.0;   // success probability in [0, 1]
};

// Closed interval on a rate scale; unbounded_upper marks [lower, inf).
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool unbounded_upper = false;

  bool contains(double x) const {
    return x >= lower && (unbounded_upper || x <= upper);
  }
  double width() const;  // +inf when unbounded
};

// P(X = k) for X ~ Binomial(n, p), evaluated in log space via lgamma.
// Throws std::domain_error unless 0 <= k <= n.
double binom_pmf(long long k, const BinomParams& params);

// P(X <= k), clamped semantics: k < 0 gives 0, k >= n gives 1.
double binom_cdf(long long k, const BinomParams& params);

// P(X >= k), clamped semantics: k <= 0 gives 1, k > n gives 0.
// The smaller tail is always summed directly, never as 1 - cdf.
double binom_sf(long long k, const BinomParams& params);

// Exact equal-tailed Clopper-Pearson interval for a binomial proportion:
// L solves P(Bin(n,L) >= k) = (1-level)/2, U solves P(Bin(n,U) <= k) =
// (1-level)/2, with closed forms at k = 0 and k = n. Roots by bisection on
// [0,1] to 1e-10 absolute.
Interval clopper_pearson(long long k, long long n, double level);

}  // namespace ifrci
