#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "ifrci/binom.hpp"
#include "ifrci/errors.hpp"
#include "support/oracles.hpp"

using namespace ifrci;

TEST_CASE("binom_pmf degenerate and hand-countable values") {
  CHECK(binom_pmf(0, {5, 0.0}) == 1.0);
  CHECK(binom_pmf(3, {5, 0.0}) == 0.0);
  CHECK(binom_pmf(5, {5, 1.0}) == 1.0);
  CHECK(binom_pmf(2, {4, 0.5}) == doctest::Approx(0.375).epsilon(1e-14));  // 6/16
  CHECK_THROWS_AS(binom_pmf(-1, {4, 0.5}), std::domain_error);
  CHECK_THROWS_AS(binom_pmf(5, {4, 0.5}), std::domain_error);
  CHECK_THROWS_AS(binom_pmf(1, {4, 1.5}), std::domain_error);
}

TEST_CASE("binom_pmf matches the log-space recurrence oracle") {
  auto table = oracle::binom_pmf_table(919, 0.15L);
  CHECK(std::fabs(binom_pmf(138, {919, 0.15}) - static_cast<double>(table[138])) < 1e-12);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const long long n = 1 + static_cast<long long>(gen() % 2000);
    const double p = unif(gen);
    const auto ref = oracle::binom_pmf_table(n, static_cast<long double>(p));
    for (int j = 0; j < 8; ++j) {
      const long long k = static_cast<long long>(gen() % static_cast<std::uint64_t>(n + 1));
      CHECK(std::fabs(binom_pmf(k, {n, p}) - static_cast<double>(ref[k])) < 1e-12);
    }
  }
}

TEST_CASE("binom_pmf sums to one") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const long long n = 1 + static_cast<long long>(gen() % 2000);
    const double p = unif(gen);
    double sum = 0.0;
    for (long long k = 0; k <= n; ++k) sum += binom_pmf(k, {n, p});
    CHECK(std::fabs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("binom_cdf clamps and matches brute-force summation") {
  CHECK(binom_cdf(2, {2, 0.7}) == 1.0);
  CHECK(binom_cdf(5, {2, 0.7}) == 1.0);
  CHECK(binom_cdf(-1, {2, 0.7}) == 0.0);
  CHECK(binom_cdf(1, {2, 0.5}) == doctest::Approx(0.75).epsilon(1e-14));

  auto table = oracle::binom_pmf_table(919, 0.15L);
  long double acc = 0.0L;
  for (int k = 0; k <= 130; ++k) acc += table[k];
  CHECK(std::fabs(binom_cdf(130, {919, 0.15}) - static_cast<double>(acc)) < 1e-10);
}

TEST_CASE("binom_sf direct values and complementarity") {
  CHECK(binom_sf(0, {7, 0.3}) == 1.0);
  CHECK(binom_sf(-2, {7, 0.3}) == 1.0);
  CHECK(binom_sf(8, {7, 0.3}) == 0.0);
  CHECK(binom_sf(2, {2, 0.5}) == doctest::Approx(0.25).epsilon(1e-14));

  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const long long n = 1 + static_cast<long long>(gen() % 3000);
    const double p = unif(gen);
    const long long k = static_cast<long long>(gen() % static_cast<std::uint64_t>(n + 1));
    CHECK(std::fabs(binom_cdf(k, {n, p}) + binom_sf(k + 1, {n, p}) - 1.0) < 1e-10);
  }
}

TEST_CASE("binom_sf small upper tail keeps absolute accuracy") {
  // far tail: direct summation must not lose the tiny mass to cancellation
  auto table = oracle::binom_pmf_table(919, 0.15L);
  long double acc = 0.0L;
  for (int k = 200; k <= 919; ++k) acc += table[k];
  const double sf = binom_sf(200, {919, 0.15});
  CHECK(sf > 0.0);
  CHECK(std::fabs(sf - static_cast<double>(acc)) < 1e-12);
}

TEST_CASE("clopper_pearson closed forms at k=0 and k=n") {
  const Interval at0 = clopper_pearson(0, 10, 0.95);
  CHECK(at0.lower == 0.0);
  CHECK(at0.upper == doctest::Approx(1.0 - std::pow(0.025, 0.1)).epsilon(1e-12));
  CHECK(at0.upper == doctest::Approx(0.30850).epsilon(1e-4));
  // the closed form solves the defining tail equation
  CHECK(std::fabs(binom_cdf(0, {10, at0.upper}) - 0.025) < 1e-9);

  const Interval at_n = clopper_pearson(10, 10, 0.95);
  CHECK(at_n.upper == 1.0);
  CHECK(at_n.lower == doctest::Approx(std::pow(0.025, 0.1)).epsilon(1e-12));
  CHECK(std::fabs(binom_sf(10, {10, at_n.lower}) - 0.025) < 1e-9);
}

TEST_CASE("clopper_pearson endpoints solve the tail equations") {
  const Interval cp = clopper_pearson(138, 919, 0.95);
  CHECK(std::fabs(binom_sf(138, {919, cp.lower}) - 0.025) < 1e-8);
  CHECK(std::fabs(binom_cdf(138, {919, cp.upper}) - 0.025) < 1e-8);
  // reference endpoints from a 40-digit bisection of the same equations
  CHECK(cp.lower == doctest::Approx(0.1276734538424893).epsilon(1e-9));
  CHECK(cp.upper == doctest::Approx(0.1749209039624079).epsilon(1e-9));
}

TEST_CASE("clopper_pearson is monotone in k") {
  const long long n = 23;
  Interval prev = clopper_pearson(0, n, 0.9);
  for (long long k = 1; k <= n; ++k) {
    const Interval cur = clopper_pearson(k, n, 0.9);
    CHECK(cur.lower >= prev.lower);
    CHECK(cur.upper >= prev.upper);
    prev = cur;
  }
}

TEST_CASE("clopper_pearson exact coverage is conservative (full enumeration)") {
  for (long long n : {1LL, 7LL, 19LL, 30LL}) {
    std::vector<Interval> intervals;
    for (long long k = 0; k <= n; ++k) intervals.push_back(clopper_pearson(k, n, 0.95));
    for (double p = 0.02; p < 0.99; p += 0.035) {
      double coverage = 0.0;
      for (long long k = 0; k <= n; ++k) {
        if (intervals[static_cast<std::size_t>(k)].lower <= p &&
            p <= intervals[static_cast<std::size_t>(k)].upper) {
          coverage += binom_pmf(k, {n, p});
        }
      }
      CHECK(coverage >= 0.95 - 1e-9);
    }
  }
}

TEST_CASE("clopper_pearson input validation") {
  CHECK_THROWS_AS(clopper_pearson(-1, 10, 0.95), std::domain_error);
  CHECK_THROWS_AS(clopper_pearson(11, 10, 0.95), std::domain_error);
  CHECK_THROWS_AS(clopper_pearson(3, 10, 0.0), std::domain_error);
  CHECK_THROWS_AS(clopper_pearson(3, 10, 1.0), std::domain_error);
}
