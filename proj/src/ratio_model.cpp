#include "ifrci/ratio_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ifrci/errors.hpp"

namespace ifrci {

namespace {

constexpr double kTieRel = 1e-9;      // relative tie tolerance on integer thresholds
constexpr double kMassFloor = 1e-18;  // pmf window cutoff

bool near_integer(double t, double r) {
  return std::fabs(t - r) <= kTieRel * std::max(1.0, std::fabs(t));
}

// Largest integer d with d <= t, treating t within the tie tolerance of an
// integer as that integer.
long long tie_floor(double t) {
  const double r = std::nearbyint(t);
  if (near_integer(t, r)) return static_cast<long long>(r);
  return static_cast<long long>(std::floor(t));
}

// Smallest integer d with d >= t, same tie rule.
long long tie_ceil(double t) {
  const double r = std::nearbyint(t);
  if (near_integer(t, r)) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(t));
}

// Contiguous window of Binomial(n, q) pmf values holding all mass above
// kMassFloor, grown outward from the mode by the multiplicative recurrence.
struct PmfWindow {
  long long lo = 0;
  std::vector<double> w;
};

PmfWindow pmf_window(long long n, double q) {
  PmfWindow win;
  if (n == 0 || q <= 0.0) {
    win.lo = 0;
    win.w = {1.0};
    return win;
  }
  if (q >= 1.0) {
    win.lo = n;
    win.w = {1.0};
    return win;
  }
  long long mode = static_cast<long long>(std::floor((static_cast<double>(n) + 1.0) * q));
  mode = std::clamp(mode, 0LL, n);
  const double pm = binom_pmf(mode, {n, q});
  const double up_ratio_num = q / (1.0 - q);
  std::vector<double> down;  // mode-1, mode-2, ...
  double term = pm;
  for (long long i = mode; i >= 1; --i) {
    term *= static_cast<double>(i) * (1.0 - q) / (static_cast<double>(n - i + 1) * q);
    if (term < kMassFloor) break;
    down.push_back(term);
  }
  std::vector<double> up;  // mode+1, mode+2, ...
  term = pm;
  for (long long i = mode; i < n; ++i) {
    term *= static_cast<double>(n - i) / static_cast<double>(i + 1) * up_ratio_num;
    if (term < kMassFloor) break;
    up.push_back(term);
  }
  win.lo = mode - static_cast<long long>(down.size());
  win.w.reserve(down.size() + 1 + up.size());
  for (auto it = down.rbegin(); it != down.rend(); ++it) win.w.push_back(*it);
  win.w.push_back(pm);
  for (double v : up) win.w.push_back(v);
  return win;
}

// Prefix CDF of Binomial(n, theta), grown on demand. The running pmf is
// kept in log space, so large theta never underflows the recurrence.
class DeathCdf {
 public:
  DeathCdf(long long n, double theta) : n_(n), theta_(theta) {
    if (theta_ > 0.0 && theta_ < 1.0) {
      log_pmf_ = static_cast<double>(n_) * std::log1p(-theta_);
      log_odds_ = std::log(theta_) - std::log1p(-theta_);
    }
  }

  double at(long long d) {
    if (d < 0) return 0.0;
    if (d >= n_) return 1.0;
    if (theta_ == 0.0) return 1.0;  // all mass at 0 <= d
    if (theta_ == 1.0) return 0.0;  // all mass at n > d
    while (static_cast<long long>(prefix_.size()) <= d) {
      const long long k = static_cast<long long>(prefix_.size());
      cum_ += std::exp(log_pmf_);
      prefix_.push_back(std::min(cum_, 1.0));
      log_pmf_ += std::log(static_cast<double>(n_ - k) / static_cast<double>(k + 1)) + log_odds_;
    }
    return prefix_[static_cast<std::size_t>(d)];
  }

 private:
  long long n_;
  double theta_;
  double log_pmf_ = 0.0;
  double log_odds_ = 0.0;
  double cum_ = 0.0;
  std::vector<double> prefix_;
};

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

void StudyCounts::validate() const {
  if (n_total < 1) throw std::invalid_argument("counts: n_total must be >= 1");
  if (n_sample < 1 || n_sample > n_total)
    throw std::invalid_argument("counts: n_sample must be in [1, n_total]");
  if (n_positive < 0 || n_positive > n_sample)
    throw std::invalid_argument("counts: n_positive must be in [0, n_sample]");
  if (n_deaths < 0 || n_deaths > n_total)
    throw std::invalid_argument("counts: n_deaths must be in [0, n_total]");
}

void ModelPoint::validate(const StudyCounts& counts) const {
  if (n_infected < 0 || n_infected > counts.n_total)
    throw std::invalid_argument("model point: n_infected must be in [0, n_total]");
  if (!(theta0 >= 0.0 && theta0 <= 1.0))
    throw std::invalid_argument("model point: theta0 must be in [0,1]");
}

void EvalMode::validate() const {
  if (kind == EvalKind::monte_carlo && replications < 1)
    throw std::invalid_argument("eval mode: replications must be >= 1");
}

double n_infected_hat(const StudyCounts& counts) {
  counts.validate();
  return static_cast<double>(counts.n_total) * static_cast<double>(counts.n_positive) /
         static_cast<double>(counts.n_sample);
}

Estimates estimate(const StudyCounts& counts) {
  counts.validate();
  if (counts.n_positive == 0)
    throw NoPositivesError("no positives: theta_hat undefined when n_positive = 0");
  Estimates est;
  est.n_infected_hat = n_infected_hat(counts);
  est.theta_hat = ratio_statistic(counts.n_deaths, counts.n_positive, counts);
  return est;
}

double ratio_statistic(long long deaths, long long positives, const StudyCounts& counts) {
  if (positives == 0) {
    return deaths == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  const double denom = static_cast<double>(counts.n_total) * static_cast<double>(positives) /
                       static_cast<double>(counts.n_sample);
  return static_cast<double>(deaths) / denom;
}

GTails g_tails_exact(double c, const ModelPoint& point, const StudyCounts& counts) {
  counts.validate();
  point.validate(counts);
  if (!(c >= 0.0)) throw std::domain_error("g_tails_exact: c must be >= 0");

  const long long n = counts.n_sample;
  const double q = static_cast<double>(point.n_infected) / static_cast<double>(counts.n_total);
  DeathCdf death_cdf(point.n_infected, point.theta0);
  const bool c_is_zero = c <= kTieRel;

  GTails tails;
  auto add_term = [&](long long pos, double w) {
    // event T <= c  <=>  N_D* <= c * (N_T * pos / N_S); the same expression
    // as ratio_statistic's denominator keeps support-point ties exact
    const double threshold =
        c * (static_cast<double>(counts.n_total) * static_cast<double>(pos) /
             static_cast<double>(counts.n_sample));
    const long long d_le = tie_floor(threshold);
    const double cdf_le = death_cdf.at(d_le);
    tails.le += w * cdf_le;
    tails.gt += w * (1.0 - cdf_le);
    if (pos == 0) {
      // atom: T is 0 when N_D* = 0 and +inf otherwise
      tails.ge += w * (c_is_zero ? 1.0 : 1.0 - death_cdf.at(0));
    } else {
      tails.ge += w * (1.0 - death_cdf.at(tie_ceil(threshold) - 1));
    }
  };

  if (q <= 0.0) {
    add_term(0, 1.0);
  } else if (q >= 1.0) {
    add_term(n, 1.0);
  } else {
    // sweep the positives pmf window without materializing it: walk down
    // from the mode to locate the start, then recurse upward term by term
    long long mode = static_cast<long long>(std::floor((static_cast<double>(n) + 1.0) * q));
    mode = std::clamp(mode, 0LL, n);
    double w = binom_pmf(mode, {n, q});
    long long lo = mode;
    while (lo >= 1) {
      const double below =
          w * static_cast<double>(lo) * (1.0 - q) / (static_cast<double>(n - lo + 1) * q);
      if (below < kMassFloor) break;
      w = below;
      --lo;
    }
    for (long long pos = lo;;) {
      add_term(pos, w);
      if (pos >= n) break;
      const double next =
          w * static_cast<double>(n - pos) * q / (static_cast<double>(pos + 1) * (1.0 - q));
      if (next < kMassFloor && pos + 1 > mode) break;
      w = next;
      ++pos;
    }
  }
  tails.le = clamp01(tails.le);
  tails.ge = clamp01(tails.ge);
  tails.gt = clamp01(tails.gt);
  return tails;
}

double g_cdf_exact(double c, const ModelPoint& point, const StudyCounts& counts) {
  return g_tails_exact(c, point, counts).le;
}

ModelSampler::ModelSampler(const ModelPoint& point, const StudyCounts& counts)
    : counts_(counts) {
  counts.validate();
  point.validate(counts);
  const double q = static_cast<double>(point.n_infected) / static_cast<double>(counts.n_total);
  positives_ = build_inverter(counts.n_sample, q);
  deaths_ = build_inverter(point.n_infected, point.theta0);
}

ModelSampler::Inverter ModelSampler::build_inverter(long long n, double p) {
  Inverter inv;
  const PmfWindow win = pmf_window(n, p);
  inv.lo = win.lo;
  inv.cdf.resize(win.w.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < win.w.size(); ++i) {
    cum += win.w[i];
    inv.cdf[i] = cum;
  }
  return inv;
}

long long ModelSampler::Inverter::invert(double u) const {
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return lo + static_cast<long long>(cdf.size()) - 1;
  return lo + static_cast<long long>(it - cdf.begin());
}

ModelDraw ModelSampler::draw(RngStream& stream) const {
  ModelDraw d;
  d.n_positive_star = positives_.invert(stream.next_u01());
  d.n_deaths_star = deaths_.invert(stream.next_u01());
  d.statistic = ratio_statistic(d.n_deaths_star, d.n_positive_star, counts_);
  return d;
}

ModelDraw ModelSampler::draw_indexed(std::uint64_t seed, std::uint64_t index) const {
  RngStream stream(seed, index);
  return draw(stream);
}

ModelDraw sample_model(const ModelPoint& point, const StudyCounts& counts, RngStream& stream) {
  return ModelSampler(point, counts).draw(stream);
}

double g_cdf_mc(double c, const ModelPoint& point, const StudyCounts& counts,
                const EvalMode& mode) {
  mode.validate();
  if (!(c >= 0.0)) throw std::domain_error("g_cdf_mc: c must be >= 0");
  const ModelSampler sampler(point, counts);
  long long hits = 0;
  for (long long i = 0; i < mode.replications; ++i) {
    if (sampler.draw_indexed(mode.seed, static_cast<std::uint64_t>(i)).statistic <= c) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(mode.replications);
}

double p_value_at(double theta_hat, double theta0, long long n_infected,
                  const StudyCounts& counts, const EvalMode& mode) {
  mode.validate();
  const ModelPoint point{n_infected, theta0};
  if (mode.kind == EvalKind::exact) {
    const GTails tails = g_tails_exact(theta_hat, point, counts);
    return std::min(1.0, 2.0 * std::min(tails.le, tails.ge));
  }
  const ModelSampler sampler(point, counts);
  long long below = 0;
  long long above = 0;
  for (long long i = 0; i < mode.replications; ++i) {
    const double s = sampler.draw_indexed(mode.seed, static_cast<std::uint64_t>(i)).statistic;
    if (s <= theta_hat) ++below;
    if (s >= theta_hat) ++above;
  }
  const double le = static_cast<double>(below) / static_cast<double>(mode.replications);
  const double ge = static_cast<double>(above) / static_cast<double>(mode.replications);
  return std::min(1.0, 2.0 * std::min(le, ge));
}

double p_value(double theta0, long long n_infected, const StudyCounts& counts,
               const EvalMode& mode) {
  return p_value_at(estimate(counts).theta_hat, theta0, n_infected, counts, mode);
}

}  // namespace ifrci
