#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ifrci/ci.hpp"
#include "ifrci/ratio_model.hpp"
#include "ifrci/rng.hpp"

namespace ifrci {

// Finite-population ground truth: fixed death indicators on the first
// n_deaths_counterfactual units, a uniformly random infected subset of size
// n_infected (the conditioning value), and an independent uniformly random
// sample of size n_sample.
struct PopulationSpec {
  long long n_total = 0;
  long long n_sample = 0;
  long long n_infected = 0;
  long long n_deaths_counterfactual = 0;
  long long replications = 2000;
  std::uint64_t seed = 0;
  void validate() const;
  double theta2() const {
    return static_cast<double>(n_deaths_counterfactual) / static_cast<double>(n_total);
  }
};

struct PopulationDraw {
  long long n_positive = 0;
  long long n_deaths = 0;
  std::optional<double> theta1;  // N_D/N_I; empty when n_infected = 0
};

// Draws the indicator-vector model by partial Fisher-Yates shuffles; scratch
// buffers are reused across draws, so one sampler per thread.
class PopulationSampler {
 public:
  explicit PopulationSampler(const PopulationSpec& spec);
  PopulationDraw draw(RngStream& stream);

 private:
  PopulationSpec spec_;
  std::vector<std::uint32_t> index_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

PopulationDraw draw_population(const PopulationSpec& spec, RngStream& stream);

enum class GenerativeModel { population, binomial };

struct MethodCoverage {
  long long covered_theta1 = 0;
  long long covered_theta2 = 0;
  long long unbounded = 0;      // intervals with no finite upper endpoint
  double width_sum = 0.0;       // over bounded intervals
  long long width_count = 0;
  double lower_p_sum = 0.0;     // endpoint p-value diagnostics (pb/cs)
  double upper_p_sum = 0.0;

  double mean_width() const { return width_count ? width_sum / width_count : 0.0; }
};

struct CoverageReport {
  long long replications = 0;
  long long skipped = 0;       // N_P = 0 replicates: no CI is attempted
  bool high_skip_rate = false; // skips exceed 0.1% of replications
  double theta2 = 0.0;
  MethodCoverage scaled, pb, cs;
  // marginal summaries over all drawn replicates
  double n_p_mean = 0.0, n_p_var = 0.0;
  double n_d_mean = 0.0, n_d_var = 0.0;
  double corr_n_p_n_d = 0.0;
  double theta1_mean = 0.0;

  long long evaluated() const { return replications - skipped; }
};

// Runs `spec.replications` replicates: draw (N_P, N_D) from the chosen
// generative model, build all three intervals, and tally coverage of the
// per-replicate theta1 and the fixed theta2. Replicate r uses RngStream
// (seed, r) and tallies are folded in fixed block order, so the result is
// identical for any thread count. For the binomial model, theta2_binomial
// (when set) replaces n_deaths_counterfactual/n_total as the death rate.
CoverageReport coverage_experiment(const PopulationSpec& spec, const CiConfig& config,
                                   GenerativeModel model, int threads = 0,
                                   std::optional<double> theta2_binomial = {});

}  // namespace ifrci
