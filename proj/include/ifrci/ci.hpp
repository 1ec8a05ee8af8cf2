#pragma once

#include <string>
#include <vector>

#include "ifrci/binom.hpp"
#include "ifrci/ratio_model.hpp"

namespace ifrci {

enum class CiMethod { scaled, pb, cs };
enum class CiTarget { theta1, theta2 };

std::string to_string(CiMethod method);
std::string to_string(CiTarget target);

struct CiConfig {
  double alpha = 0.05;            // miscoverage level
  double beta = 0.01;             // preliminary-interval level for the cs method
  EvalMode eval{};                // exact by default
  double theta_grid_step = 1e-4;  // initial scan resolution on theta0
  double endpoint_tol = 1e-6;     // endpoint bisection tolerance
  long long n_i_stride = 1;       // nuisance scan stride (cs)
  bool verify_connected = false;  // full-grid check that the region is an interval
  void validate() const;          // throws std::invalid_argument
};

// One evaluated theta0 during endpoint search. For the cs method `p` is the
// value that settled acceptance (a lower bound on the sup once a point
// crosses the threshold and the scan short-circuits).
struct GridEval {
  double theta0 = 0.0;
  double p = 0.0;
  bool accepted = false;
};

struct EndpointDiag {
  double p = 0.0;           // p-value (pb) or sup p-value (cs) at the endpoint
  long long max_n_i = -1;   // maximizing n_I at the endpoint (cs only)
};

struct CiDiagnostics {
  std::vector<GridEval> scan;     // every theta0 evaluated, in search order
  EndpointDiag lower, upper;      // pb/cs only
  double cp_lower = -1.0;         // scaled only: Clopper-Pearson bounds
  double cp_upper = -1.0;
  long long n_i_plugin = -1;      // pb only: round(Nhat_I)
  long long n_i_lo = -1;          // cs only: preliminary nuisance range
  long long n_i_hi = -1;
};

struct CiResult {
  CiMethod method = CiMethod::scaled;
  CiTarget target = CiTarget::theta1;
  Interval interval;
  CiDiagnostics diagnostics;
};

// Integer range for the nuisance scan: round_up(N_T * L_beta) ..
// round_down(N_T * U_beta) from the (1-beta) Clopper-Pearson interval for
// N_P/N_S, intersected with [max(N_D, 0), N_T]. Throws NumericError if empty.
struct NiRange {
  long long lo = 0;
  long long hi = 0;
};
NiRange prelim_n_i_range(const StudyCounts& counts, const CiConfig& config);

// C1: the (1-alpha) Clopper-Pearson interval for N_P/N_S scaled onto the
// IFR axis. Targets theta1. N_D = 0 collapses to [0, 0]; N_P = 0 leaves the
// upper endpoint unbounded.
CiResult ci_scaled(const StudyCounts& counts, const CiConfig& config);

// C2,PB: test inversion with the nuisance fixed at round(Nhat_I).
// Targets theta2. Throws NoPositivesError when N_P = 0.
CiResult ci_pb(const StudyCounts& counts, const CiConfig& config);

// C2,CS: Berger-Boos inversion, accepting theta0 when
// sup over the preliminary range of p(theta0, n_I) + beta >= alpha.
// Targets theta2. Requires N_P >= 1 or N_D = 0.
CiResult ci_cs(const StudyCounts& counts, const CiConfig& config);

}  // namespace ifrci
