#pragma once

#include <cstdint>
#include <vector>

#include "ifrci/binom.hpp"
#include "ifrci/rng.hpp"

namespace ifrci {

// Observed aggregates of a study.
struct StudyCounts {
  long long n_total = 0;     // population size N_T
  long long n_sample = 0;    // sample size N_S
  long long n_positive = 0;  // sample positives N_P
  long long n_deaths = 0;    // observed deaths N_D
  void validate() const;     // throws std::invalid_argument
};

// A hypothesized (n_infected, theta0) pair indexing the two-binomial null
// model: N_P* ~ Bin(N_S, n_I/N_T) independent of N_D* ~ Bin(n_I, theta0).
struct ModelPoint {
  long long n_infected = 0;
  double theta0 = 0.0;
  void validate(const StudyCounts& counts) const;
};

struct ModelDraw {
  long long n_positive_star = 0;
  long long n_deaths_star = 0;
  double statistic = 0.0;  // N_D*/Nhat_I*; +inf when N_P* = 0 < N_D*
};

enum class EvalKind { exact, monte_carlo };

struct EvalMode {
  EvalKind kind = EvalKind::exact;
  long long replications = 200000;  // monte_carlo only
  std::uint64_t seed = 0;
  void validate() const;
};

struct Estimates {
  double n_infected_hat = 0.0;  // N_T * N_P / N_S, not rounded
  double theta_hat = 0.0;       // N_D / n_infected_hat
};

// N_T * N_P / N_S; 0 when there are no positives.
double n_infected_hat(const StudyCounts& counts);

// Point estimates; throws NoPositivesError when n_positive = 0.
Estimates estimate(const StudyCounts& counts);

// The ratio statistic deaths / (N_T * positives / N_S) with the
// zero-denominator convention: 0 if deaths = positives = 0, +inf if
// positives = 0 < deaths. theta_hat and every simulated statistic go through
// this one expression, so exact rational ties stay exact in floating point.
double ratio_statistic(long long deaths, long long positives, const StudyCounts& counts);

// Tail masses of the ratio statistic T under a model point.
struct GTails {
  double le = 0.0;  // P(T <= c)
  double ge = 0.0;  // P(T >= c)
  double gt = 0.0;  // P(T >  c)
};

// Exact tails by total probability over N_P*: for each positives value p the
// event T <= c is N_D* <= floor(c * N_T * p / N_S), with a relative 1e-9 tie
// tolerance where the threshold lands on an integer, and the p = 0 atom
// handled by the zero-denominator convention. Absolute error <= 1e-9.
GTails g_tails_exact(double c, const ModelPoint& point, const StudyCounts& counts);

// P(T <= c), exact. Requires c >= 0.
double g_cdf_exact(double c, const ModelPoint& point, const StudyCounts& counts);

// Draws (N_P*, N_D*) by inverting per-distribution CDF tables built once at
// construction; cheap for bulk sampling at a fixed model point.
class ModelSampler {
 public:
  ModelSampler(const ModelPoint& point, const StudyCounts& counts);

  ModelDraw draw(RngStream& stream) const;

  // Counter-based: draw `index` under `seed`, independent of call order.
  ModelDraw draw_indexed(std::uint64_t seed, std::uint64_t index) const;

 private:
  struct Inverter {
    long long lo = 0;
    std::vector<double> cdf;  // cdf[i] = P(X <= lo + i) over the mass window
    long long invert(double u) const;
  };
  static Inverter build_inverter(long long n, double p);

  StudyCounts counts_;
  Inverter positives_;
  Inverter deaths_;
};

// One draw from the model; convenience wrapper over ModelSampler.
ModelDraw sample_model(const ModelPoint& point, const StudyCounts& counts, RngStream& stream);

// Empirical P(T <= c) from mode.replications counter-based draws.
double g_cdf_mc(double c, const ModelPoint& point, const StudyCounts& counts,
                const EvalMode& mode);

// Equal-tailed p-value of H0: theta2 = theta0 with the infection count held
// at n_infected: min(1, 2 min{P(T <= theta_hat), P(T >= theta_hat)}), both
// tails inclusive. Throws NoPositivesError when theta_hat is undefined.
double p_value(double theta0, long long n_infected, const StudyCounts& counts,
               const EvalMode& mode);

// Same, with the observed threshold supplied by the caller.
double p_value_at(double theta_hat, double theta0, long long n_infected,
                  const StudyCounts& counts, const EvalMode& mode);

}  // namespace ifrci
