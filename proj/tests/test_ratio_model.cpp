#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "ifrci/errors.hpp"
#include "ifrci/ratio_model.hpp"
#include "support/oracles.hpp"

using namespace ifrci;

namespace {
const StudyCounts kStudy{12597, 919, 138, 7};  // reference study counts
const StudyCounts kTiny{4, 2, 0, 0};           // N_T=4, N_S=2; model point supplies the rest
}  // namespace

TEST_CASE("estimate reproduces the reference study values") {
  const Estimates est = estimate(kStudy);
  CHECK(est.n_infected_hat == doctest::Approx(1891.6060935799783).epsilon(1e-12));
  CHECK(std::llround(est.n_infected_hat) == 1892);
  CHECK(est.theta_hat == doctest::Approx(0.0037005590242903475).epsilon(1e-12));
}

TEST_CASE("estimate edge cases") {
  CHECK(estimate({1000, 100, 100, 3}).n_infected_hat == doctest::Approx(1000.0));  // full prevalence
  CHECK(estimate({1000, 100, 50, 0}).theta_hat == 0.0);
  CHECK(n_infected_hat({1000, 100, 0, 0}) == 0.0);
  CHECK_THROWS_AS(estimate({1000, 100, 0, 0}), NoPositivesError);
  CHECK_THROWS_AS(estimate({1000, 2000, 10, 0}), std::invalid_argument);
}

TEST_CASE("ratio_statistic zero-denominator convention") {
  CHECK(ratio_statistic(0, 0, kStudy) == 0.0);
  CHECK(std::isinf(ratio_statistic(3, 0, kStudy)));
  CHECK(ratio_statistic(7, 138, kStudy) == estimate(kStudy).theta_hat);
  // proportional counts give the identical double
  CHECK(ratio_statistic(14, 276, kStudy) == ratio_statistic(7, 138, kStudy));
}

TEST_CASE("sample_model degenerate points") {
  const StudyCounts counts{100, 30, 0, 0};
  RngStream stream(42);
  for (int i = 0; i < 200; ++i) {
    const ModelDraw d = sample_model({50, 0.0}, counts, stream);
    CHECK(d.n_deaths_star == 0);
    CHECK(d.statistic == 0.0);
  }
  for (int i = 0; i < 200; ++i) {
    const ModelDraw d = sample_model({0, 0.7}, counts, stream);
    CHECK(d.n_positive_star == 0);
    CHECK(d.n_deaths_star == 0);
    CHECK(d.statistic == 0.0);
  }
}

TEST_CASE("sample_model positives mean matches the binomial moment") {
  const StudyCounts counts{1000, 200, 0, 0};
  const ModelPoint point{150, 0.1};
  const ModelSampler sampler(point, counts);
  const long long reps = 100000;
  double sum = 0.0;
  for (long long i = 0; i < reps; ++i) {
    sum += static_cast<double>(sampler.draw_indexed(5, static_cast<std::uint64_t>(i)).n_positive_star);
  }
  const double q = 150.0 / 1000.0;
  const double mean = sum / static_cast<double>(reps);
  const double se = std::sqrt(200.0 * q * (1.0 - q) / static_cast<double>(reps));
  CHECK(std::fabs(mean - 200.0 * q) < 4.0 * se);
}

TEST_CASE("sample_model draws are reproducible and order-independent") {
  const ModelSampler sampler({1892, 0.004}, kStudy);
  const ModelDraw a = sampler.draw_indexed(123, 77);
  const ModelDraw b = sampler.draw_indexed(123, 77);
  CHECK(a.n_positive_star == b.n_positive_star);
  CHECK(a.n_deaths_star == b.n_deaths_star);
  const ModelDraw c = sampler.draw_indexed(124, 77);
  const ModelDraw d = sampler.draw_indexed(123, 78);
  const bool all_same = c.n_positive_star == a.n_positive_star &&
                        c.n_deaths_star == a.n_deaths_star &&
                        d.n_positive_star == a.n_positive_star &&
                        d.n_deaths_star == a.n_deaths_star;
  CHECK_FALSE(all_same);
}

TEST_CASE("g_cdf_exact at theta0=0 is one") {
  for (double c : {0.0, 0.001, 0.3, 2.0}) {
    CHECK(g_cdf_exact(c, {1892, 0.0}, kStudy) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("g_cdf_exact nine-outcome enumeration case") {
  // N_S=2, N_T=4, n_I=2, theta0=0.5: 9 equally structured outcomes
  const double g = g_cdf_exact(0.5, {2, 0.5}, kTiny);
  CHECK(g == doctest::Approx(0.6875).epsilon(1e-12));
  const oracle::Tails ref = oracle::enum_tails(0.5, 2, 0.5, kTiny);
  CHECK(g == doctest::Approx(ref.le).epsilon(1e-12));
}

TEST_CASE("g_tails_exact equals full enumeration on small instances") {
  const double thetas[] = {0.0, 0.3, 0.618, 1.0};
  const double cs[] = {0.0, 0.2, 0.5, 1.0, 1.7};
  for (long long nt : {2LL, 3LL, 4LL, 6LL, 10LL}) {
    for (long long ns = 1; ns <= std::min<long long>(nt, 6); ++ns) {
      const StudyCounts counts{nt, ns, 0, 0};
      for (long long ni = 0; ni <= std::min<long long>(nt, 6); ++ni) {
        for (double th : thetas) {
          for (double c : cs) {
            const GTails got = g_tails_exact(c, {ni, th}, counts);
            const oracle::Tails ref = oracle::enum_tails(c, ni, th, counts);
            CHECK(std::fabs(got.le - ref.le) < 1e-12);
            CHECK(std::fabs(got.ge - ref.ge) < 1e-12);
            CHECK(std::fabs(got.gt - ref.gt) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("g_tails_exact handles support-point ties inclusively") {
  // c exactly on a support point: stat(1, 1) with N_T=4, N_S=2 is 0.5
  const StudyCounts counts{4, 2, 0, 0};
  const double support = ratio_statistic(1, 1, counts);
  const GTails at = g_tails_exact(support, {2, 0.5}, counts);
  const oracle::Tails ref = oracle::enum_tails(support, 2, 0.5, counts);
  CHECK(at.le == doctest::Approx(ref.le).epsilon(1e-12));
  CHECK(at.ge == doctest::Approx(ref.ge).epsilon(1e-12));
  // inclusive vs strict differ by the atom at the support point
  CHECK(at.le - (1.0 - at.ge) > 1e-3);
}

TEST_CASE("g_cdf_exact is monotone in c and complements its strict tail") {
  const ModelPoint point{1892, 0.004};
  double prev = -1.0;
  for (double c = 0.0; c <= 0.02; c += 0.0004) {
    const GTails t = g_tails_exact(c, point, kStudy);
    CHECK(t.le >= prev);
    CHECK(std::fabs(t.le + t.gt - 1.0) < 1e-9);
    prev = t.le;
  }
}

TEST_CASE("g_cdf_exact is non-increasing in theta0") {
  const double c = 0.0037;
  double prev = 2.0;
  for (double th = 0.0; th <= 0.02; th += 0.0005) {
    const double g = g_cdf_exact(c, {1892, th}, kStudy);
    CHECK(g <= prev + 1e-12);
    prev = g;
  }
}

TEST_CASE("g_cdf_mc is deterministic and agrees with the exact evaluator") {
  const ModelPoint point{1892, 0.0037005590242903475};
  EvalMode mode;
  mode.kind = EvalKind::monte_carlo;
  mode.replications = 200000;
  mode.seed = 99;
  const double c = estimate(kStudy).theta_hat;
  const double mc1 = g_cdf_mc(c, point, kStudy, mode);
  const double mc2 = g_cdf_mc(c, point, kStudy, mode);
  CHECK(mc1 == mc2);
  const double exact = g_cdf_exact(c, point, kStudy);
  const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(mode.replications));
  CHECK(std::fabs(mc1 - exact) < 3.0 * se);
}

TEST_CASE("g_cdf_mc at theta0=0 is one") {
  EvalMode mode;
  mode.kind = EvalKind::monte_carlo;
  mode.replications = 5000;
  mode.seed = 3;
  CHECK(g_cdf_mc(0.2, {500, 0.0}, kStudy, mode) == 1.0);
}

TEST_CASE("p_value extremes") {
  const EvalMode exact;
  // theta0 = 0 makes the observed deaths impossible
  CHECK(p_value(0.0, 1892, kStudy, exact) == 0.0);
  // theta0 = 1 puts the observed rate in the far lower tail
  CHECK(p_value(1.0, 1892, kStudy, exact) < 1e-12);
}

TEST_CASE("p_value equals the enumeration oracle on a 3x3 grid") {
  const StudyCounts counts{4, 2, 1, 1};  // theta_hat = 0.5
  const EvalMode exact;
  const double theta_hat = estimate(counts).theta_hat;
  for (long long ni : {1LL, 2LL, 3LL}) {
    for (double th : {0.2, 0.5, 0.9}) {
      const double got = p_value(th, ni, counts, exact);
      const double ref = oracle::enum_p_value(theta_hat, th, ni, counts);
      CHECK(got == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("p_value stays in [0,1] and is deterministic in exact mode") {
  const EvalMode exact;
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const long long nt = 20 + static_cast<long long>(gen() % 2000);
    const long long ns = 1 + static_cast<long long>(gen() % static_cast<std::uint64_t>(nt));
    const long long np = 1 + static_cast<long long>(gen() % static_cast<std::uint64_t>(ns));
    const long long nd = static_cast<long long>(gen() % 10);
    const StudyCounts counts{nt, ns, np, std::min(nd, nt)};
    const long long ni = static_cast<long long>(gen() % static_cast<std::uint64_t>(nt + 1));
    const double th = unif(gen);
    const double p1 = p_value(th, ni, counts, exact);
    const double p2 = p_value(th, ni, counts, exact);
    CHECK(p1 == p2);
    CHECK(p1 >= 0.0);
    CHECK(p1 <= 1.0);
  }
}

TEST_CASE("p_value Monte Carlo mode approximates exact mode") {
  EvalMode mc;
  mc.kind = EvalKind::monte_carlo;
  mc.replications = 200000;
  mc.seed = 31;
  const EvalMode exact;
  const double pe = p_value(0.005, 1892, kStudy, exact);
  const double pm = p_value(0.005, 1892, kStudy, mc);
  CHECK(std::fabs(pe - pm) < 0.01);
}
