#include "ifrci/popsim.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "ifrci/errors.hpp"

namespace ifrci {

namespace {

constexpr long long kBlockSize = 32;  // replicates per work unit

struct BlockTally {
  MethodCoverage scaled, pb, cs;
  long long skipped = 0;
  long long drawn = 0;
  double sum_np = 0.0, sum_np2 = 0.0;
  double sum_nd = 0.0, sum_nd2 = 0.0;
  double sum_npnd = 0.0;
  double sum_theta1 = 0.0;
};

void merge_method(MethodCoverage& into, const MethodCoverage& from) {
  into.covered_theta1 += from.covered_theta1;
  into.covered_theta2 += from.covered_theta2;
  into.unbounded += from.unbounded;
  into.width_sum += from.width_sum;
  into.width_count += from.width_count;
  into.lower_p_sum += from.lower_p_sum;
  into.upper_p_sum += from.upper_p_sum;
}

void tally_interval(MethodCoverage& tally, const CiResult& result, double theta1, double theta2) {
  if (result.interval.contains(theta1)) ++tally.covered_theta1;
  if (result.interval.contains(theta2)) ++tally.covered_theta2;
  if (result.interval.unbounded_upper) {
    ++tally.unbounded;
  } else {
    tally.width_sum += result.interval.width();
    ++tally.width_count;
  }
  tally.lower_p_sum += result.diagnostics.lower.p;
  tally.upper_p_sum += result.diagnostics.upper.p;
}

}  // namespace

void PopulationSpec::validate() const {
  if (n_total < 1) throw std::invalid_argument("population: n_total must be >= 1");
  if (n_sample < 1 || n_sample > n_total)
    throw std::invalid_argument("population: n_sample must be in [1, n_total]");
  if (n_infected < 0 || n_infected > n_total)
    throw std::invalid_argument("population: n_infected must be in [0, n_total]");
  if (n_deaths_counterfactual < 0 || n_deaths_counterfactual > n_total)
    throw std::invalid_argument("population: n_deaths_counterfactual must be in [0, n_total]");
  if (replications < 1) throw std::invalid_argument("population: replications must be >= 1");
}

PopulationSampler::PopulationSampler(const PopulationSpec& spec) : spec_(spec) {
  spec.validate();
  index_.resize(static_cast<std::size_t>(spec.n_total));
  stamp_.assign(static_cast<std::size_t>(spec.n_total), 0);
}

PopulationDraw PopulationSampler::draw(RngStream& stream) {
  const auto n = static_cast<std::uint64_t>(spec_.n_total);
  ++epoch_;
  if (epoch_ == 0) {  // wrapped: old stamps would alias
    std::fill(stamp_.begin(), stamp_.end(), 0u);
    epoch_ = 1;
  }

  // infected subset: partial Fisher-Yates prefix of size n_infected
  std::iota(index_.begin(), index_.end(), 0u);
  PopulationDraw out;
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(spec_.n_infected); ++j) {
    const std::uint64_t swap_at = j + stream.next_below(n - j);
    std::swap(index_[j], index_[swap_at]);
    const std::uint32_t unit = index_[j];
    stamp_[unit] = epoch_;
    // death indicators live on the first n_deaths_counterfactual units
    if (unit < static_cast<std::uint32_t>(spec_.n_deaths_counterfactual)) ++out.n_deaths;
  }

  // independent sample subset
  std::iota(index_.begin(), index_.end(), 0u);
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(spec_.n_sample); ++j) {
    const std::uint64_t swap_at = j + stream.next_below(n - j);
    std::swap(index_[j], index_[swap_at]);
    if (stamp_[index_[j]] == epoch_) ++out.n_positive;
  }

  if (spec_.n_infected > 0) {
    out.theta1 = static_cast<double>(out.n_deaths) / static_cast<double>(spec_.n_infected);
  }
  return out;
}

PopulationDraw draw_population(const PopulationSpec& spec, RngStream& stream) {
  PopulationSampler sampler(spec);
  return sampler.draw(stream);
}

CoverageReport coverage_experiment(const PopulationSpec& spec, const CiConfig& config,
                                   GenerativeModel model, int threads,
                                   std::optional<double> theta2_binomial) {
  spec.validate();
  config.validate();
  if (spec.n_infected == 0)
    throw std::invalid_argument("coverage: n_infected must be >= 1 (theta1 undefined)");
  if (theta2_binomial && model != GenerativeModel::binomial)
    throw std::invalid_argument("coverage: theta2 override applies to the binomial model only");
  const double theta2 = theta2_binomial ? *theta2_binomial : spec.theta2();
  if (!(theta2 >= 0.0 && theta2 <= 1.0))
    throw std::invalid_argument("coverage: theta2 must be in [0,1]");

  // binomial-model inverters are fixed across replicates; share them
  const StudyCounts base{spec.n_total, spec.n_sample, 0, 0};
  std::optional<ModelSampler> binom_sampler;
  if (model == GenerativeModel::binomial) {
    binom_sampler.emplace(ModelPoint{spec.n_infected, theta2}, base);
  }

  const long long n_blocks = (spec.replications + kBlockSize - 1) / kBlockSize;
  std::vector<BlockTally> blocks(static_cast<std::size_t>(n_blocks));
  std::atomic<long long> next_block{0};

  auto worker = [&]() {
    PopulationSampler pop_sampler(spec);
    for (;;) {
      const long long b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      BlockTally& tally = blocks[static_cast<std::size_t>(b)];
      const long long rep_lo = b * kBlockSize;
      const long long rep_hi = std::min(spec.replications, rep_lo + kBlockSize);
      for (long long rep = rep_lo; rep < rep_hi; ++rep) {
        RngStream stream(spec.seed, static_cast<std::uint64_t>(rep));
        PopulationDraw d;
        if (model == GenerativeModel::population) {
          d = pop_sampler.draw(stream);
        } else {
          const ModelDraw md = binom_sampler->draw(stream);
          d.n_positive = md.n_positive_star;
          d.n_deaths = md.n_deaths_star;
          d.theta1 = static_cast<double>(md.n_deaths_star) / static_cast<double>(spec.n_infected);
        }
        ++tally.drawn;
        const double np = static_cast<double>(d.n_positive);
        const double nd = static_cast<double>(d.n_deaths);
        tally.sum_np += np;
        tally.sum_np2 += np * np;
        tally.sum_nd += nd;
        tally.sum_nd2 += nd * nd;
        tally.sum_npnd += np * nd;
        tally.sum_theta1 += *d.theta1;

        if (d.n_positive == 0) {
          ++tally.skipped;
          continue;
        }
        const StudyCounts counts{spec.n_total, spec.n_sample, d.n_positive, d.n_deaths};
        const double theta1 = *d.theta1;
        tally_interval(tally.scaled, ci_scaled(counts, config), theta1, theta2);
        tally_interval(tally.pb, ci_pb(counts, config), theta1, theta2);
        tally_interval(tally.cs, ci_cs(counts, config), theta1, theta2);
      }
    }
  };

  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_blocks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // fold in block order so the result is independent of scheduling
  CoverageReport report;
  report.replications = spec.replications;
  report.theta2 = theta2;
  double sum_np = 0, sum_np2 = 0, sum_nd = 0, sum_nd2 = 0, sum_npnd = 0, sum_theta1 = 0;
  for (const BlockTally& tally : blocks) {
    report.skipped += tally.skipped;
    merge_method(report.scaled, tally.scaled);
    merge_method(report.pb, tally.pb);
    merge_method(report.cs, tally.cs);
    sum_np += tally.sum_np;
    sum_np2 += tally.sum_np2;
    sum_nd += tally.sum_nd;
    sum_nd2 += tally.sum_nd2;
    sum_npnd += tally.sum_npnd;
    sum_theta1 += tally.sum_theta1;
  }
  const double r = static_cast<double>(spec.replications);
  report.n_p_mean = sum_np / r;
  report.n_d_mean = sum_nd / r;
  report.n_p_var = sum_np2 / r - report.n_p_mean * report.n_p_mean;
  report.n_d_var = sum_nd2 / r - report.n_d_mean * report.n_d_mean;
  const double cov = sum_npnd / r - report.n_p_mean * report.n_d_mean;
  const double denom = std::sqrt(report.n_p_var * report.n_d_var);
  report.corr_n_p_n_d = denom > 0.0 ? cov / denom : 0.0;
  report.theta1_mean = sum_theta1 / r;
  report.high_skip_rate = static_cast<double>(report.skipped) > 0.001 * r;
  return report;
}

}  // namespace ifrci
