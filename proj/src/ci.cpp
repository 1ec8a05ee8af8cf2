#include "ifrci/ci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ifrci/errors.hpp"

namespace ifrci {

namespace {

// Bisect the accept/reject boundary between a rejected and an accepted
// theta0; returns the bracket midpoint once it is narrower than tol.
template <class AcceptFn>
double bisect_edge(double rejected, double accepted, double tol, AcceptFn&& accept) {
  while (std::fabs(accepted - rejected) > tol) {
    const double mid = 0.5 * (accepted + rejected);
    if (mid == accepted || mid == rejected) break;
    if (accept(mid)) {
      accepted = mid;
    } else {
      rejected = mid;
    }
  }
  return 0.5 * (accepted + rejected);
}

// Locate the connected acceptance region around `origin` by walking the
// theta0 grid outward on each flank and bisecting the first rejected step.
// If origin itself is rejected (possible in discrete corners), fall back to
// a full grid sweep.
template <class AcceptFn>
Interval invert_region(double origin, const CiConfig& config, AcceptFn&& accept) {
  const double step = config.theta_grid_step;
  const double tol = config.endpoint_tol;
  const long long k_max = static_cast<long long>(std::ceil(1.0 / step));

  if (!accept(origin)) {
    long long first_acc = -1;
    long long last_acc = -1;
    for (long long k = 0; k <= k_max; ++k) {
      const double x = std::min(static_cast<double>(k) * step, 1.0);
      if (accept(x)) {
        if (first_acc < 0) first_acc = k;
        last_acc = k;
      }
    }
    if (first_acc < 0) throw NumericError("empty acceptance region");
    Interval out;
    out.lower = first_acc == 0
                    ? 0.0
                    : bisect_edge(static_cast<double>(first_acc - 1) * step,
                                  static_cast<double>(first_acc) * step, tol, accept);
    out.upper = last_acc == k_max
                    ? 1.0
                    : bisect_edge(std::min(static_cast<double>(last_acc + 1) * step, 1.0),
                                  static_cast<double>(last_acc) * step, tol, accept);
    return out;
  }

  Interval out;
  {
    double acc = origin;
    bool found_edge = false;
    for (long long k = static_cast<long long>(std::floor(origin / step)); k >= 0; --k) {
      const double x = static_cast<double>(k) * step;
      if (x >= acc) continue;
      if (accept(x)) {
        acc = x;
        continue;
      }
      out.lower = bisect_edge(x, acc, tol, accept);
      found_edge = true;
      break;
    }
    if (!found_edge) out.lower = 0.0;
  }
  {
    double acc = origin;
    bool found_edge = false;
    for (long long k = static_cast<long long>(std::ceil(origin / step)); k <= k_max; ++k) {
      const double x = std::min(static_cast<double>(k) * step, 1.0);
      if (x <= acc) continue;
      if (accept(x)) {
        acc = x;
        continue;
      }
      out.upper = bisect_edge(x, acc, tol, accept);
      found_edge = true;
      break;
    }
    if (!found_edge) out.upper = 1.0;
  }
  return out;
}

// Debug guard: no accepted grid point may exist more than one step outside
// the reported interval.
template <class AcceptFn>
void verify_connected(const Interval& interval, const CiConfig& config, AcceptFn&& accept) {
  const double step = config.theta_grid_step;
  const long long k_max = static_cast<long long>(std::ceil(1.0 / step));
  for (long long k = 0; k <= k_max; ++k) {
    const double x = std::min(static_cast<double>(k) * step, 1.0);
    if (x >= interval.lower - step && x <= interval.upper + step) continue;
    if (accept(x)) {
      throw NumericError("acceptance region not connected: accepted theta0=" +
                         std::to_string(x) + " outside [" + std::to_string(interval.lower) +
                         ", " + std::to_string(interval.upper) + "]");
    }
  }
}

}  // namespace

std::string to_string(CiMethod method) {
  switch (method) {
    case CiMethod::scaled: return "scaled";
    case CiMethod::pb: return "pb";
    case CiMethod::cs: return "cs";
  }
  return "?";
}

std::string to_string(CiTarget target) {
  return target == CiTarget::theta1 ? "theta1" : "theta2";
}

void CiConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ci config: alpha must be in (0,1)");
  if (!(beta > 0.0 && beta < alpha))
    throw std::invalid_argument("ci config: beta must be in (0, alpha)");
  if (!(theta_grid_step > 0.0 && theta_grid_step <= 0.5))
    throw std::invalid_argument("ci config: theta_grid_step must be in (0, 0.5]");
  if (!(endpoint_tol > 0.0 && endpoint_tol < theta_grid_step))
    throw std::invalid_argument("ci config: endpoint_tol must be in (0, theta_grid_step)");
  if (n_i_stride < 1) throw std::invalid_argument("ci config: n_i_stride must be >= 1");
  eval.validate();
}

NiRange prelim_n_i_range(const StudyCounts& counts, const CiConfig& config) {
  counts.validate();
  config.validate();
  const Interval cp = clopper_pearson(counts.n_positive, counts.n_sample, 1.0 - config.beta);
  long long lo = static_cast<long long>(std::ceil(cp.lower * static_cast<double>(counts.n_total)));
  long long hi = static_cast<long long>(std::floor(cp.upper * static_cast<double>(counts.n_total)));
  lo = std::max({lo, counts.n_deaths, 0LL});
  hi = std::min(hi, counts.n_total);
  if (lo > hi) throw NumericError("empty nuisance range for the cs interval");
  return {lo, hi};
}

CiResult ci_scaled(const StudyCounts& counts, const CiConfig& config) {
  counts.validate();
  config.validate();
  const Interval cp = clopper_pearson(counts.n_positive, counts.n_sample, 1.0 - config.alpha);

  CiResult res;
  res.method = CiMethod::scaled;
  res.target = CiTarget::theta1;
  res.diagnostics.cp_lower = cp.lower;
  res.diagnostics.cp_upper = cp.upper;

  const double deaths = static_cast<double>(counts.n_deaths);
  const double total = static_cast<double>(counts.n_total);
  if (counts.n_deaths == 0) {
    res.interval = {0.0, 0.0, false};
  } else if (counts.n_positive == 0) {
    // L_alpha = 0: no finite upper bound
    res.interval.lower = std::min(deaths / (total * cp.upper), 1.0);
    res.interval.upper = std::numeric_limits<double>::infinity();
    res.interval.unbounded_upper = true;
  } else {
    const double lo = deaths / (total * cp.upper);
    const double hi = deaths / (total * cp.lower);
    res.interval = {std::min(lo, 1.0), std::min(hi, 1.0), false};
  }
  return res;
}

CiResult ci_pb(const StudyCounts& counts, const CiConfig& config) {
  counts.validate();
  config.validate();
  if (counts.n_positive == 0)
    throw NoPositivesError("no positives: C2,PB needs n_positive >= 1");
  const Estimates est = estimate(counts);
  const long long n_i = std::llround(est.n_infected_hat);

  CiResult res;
  res.method = CiMethod::pb;
  res.target = CiTarget::theta2;
  res.diagnostics.n_i_plugin = n_i;

  auto accept = [&](double theta0) {
    const double p = p_value_at(est.theta_hat, theta0, n_i, counts, config.eval);
    const bool ok = p >= config.alpha;
    res.diagnostics.scan.push_back({theta0, p, ok});
    return ok;
  };

  const double origin = std::clamp(est.theta_hat, 0.0, 1.0);
  res.interval = invert_region(origin, config, accept);
  res.diagnostics.lower = {
      p_value_at(est.theta_hat, res.interval.lower, n_i, counts, config.eval), n_i};
  res.diagnostics.upper = {
      p_value_at(est.theta_hat, res.interval.upper, n_i, counts, config.eval), n_i};
  if (config.verify_connected) verify_connected(res.interval, config, accept);
  return res;
}

CiResult ci_cs(const StudyCounts& counts, const CiConfig& config) {
  counts.validate();
  config.validate();
  if (counts.n_positive == 0 && counts.n_deaths > 0)
    throw NoPositivesError("no positives: C2,CS needs n_positive >= 1 when deaths were observed");
  // With no observed deaths the estimated rate is 0 whatever the denominator.
  const double theta_hat = counts.n_deaths == 0 ? 0.0 : estimate(counts).theta_hat;
  const NiRange range = prelim_n_i_range(counts, config);

  CiResult res;
  res.method = CiMethod::cs;
  res.target = CiTarget::theta2;
  res.diagnostics.n_i_lo = range.lo;
  res.diagnostics.n_i_hi = range.hi;

  auto passes = [&](double p) { return p + config.beta >= config.alpha; };

  // Sup of p(theta0, n_I) over the range: strided pass, then a stride-1
  // refinement around the running maximum. Unless exhaustive, stops at the
  // first point that already passes the acceptance threshold.
  auto sup_p = [&](double theta0, bool exhaustive, long long* argmax_out) {
    double best = -1.0;
    long long best_n = range.lo;
    auto consider = [&](long long n) {
      const double p = p_value_at(theta_hat, theta0, n, counts, config.eval);
      if (p > best) {
        best = p;
        best_n = n;
      }
      return !exhaustive && passes(p);
    };
    bool stopped = false;
    for (long long n = range.lo;;) {
      if (consider(n)) {
        stopped = true;
        break;
      }
      if (n >= range.hi) break;
      n = std::min(n + config.n_i_stride, range.hi);
    }
    if (!stopped && config.n_i_stride > 1) {
      const long long w_lo = std::max(range.lo, best_n - config.n_i_stride + 1);
      const long long w_hi = std::min(range.hi, best_n + config.n_i_stride - 1);
      for (long long n = w_lo; n <= w_hi; ++n) {
        if ((n - range.lo) % config.n_i_stride == 0 || n == range.hi) continue;
        if (consider(n)) break;
      }
    }
    if (argmax_out) *argmax_out = best_n;
    return best;
  };

  auto accept = [&](double theta0) {
    const double p = sup_p(theta0, false, nullptr);
    const bool ok = passes(p);
    res.diagnostics.scan.push_back({theta0, p, ok});
    return ok;
  };

  const double origin = std::clamp(theta_hat, 0.0, 1.0);
  res.interval = invert_region(origin, config, accept);
  res.diagnostics.lower.p = sup_p(res.interval.lower, true, &res.diagnostics.lower.max_n_i);
  res.diagnostics.upper.p = sup_p(res.interval.upper, true, &res.diagnostics.upper.max_n_i);
  if (config.verify_connected) verify_connected(res.interval, config, accept);
  return res;
}

}  // namespace ifrci
