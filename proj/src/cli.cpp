#include "ifrci/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ifrci/ci.hpp"
#include "ifrci/errors.hpp"
#include "ifrci/popsim.hpp"
#include "ifrci/ratio_model.hpp"

namespace ifrci::cli {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_rate(double v, bool percent) {
  if (percent) return fmt_g(v * 100.0) + "%";
  return fmt_g(v);
}

void check_choice(const std::string& value, std::initializer_list<const char*> choices,
                  const char* flag) {
  for (const char* c : choices) {
    if (value == c) return;
  }
  std::string msg = std::string("invalid value '") + value + "' for " + flag + " (expected one of";
  for (const char* c : choices) msg += std::string(" ") + c;
  throw UsageError(msg + ")");
}

EvalMode make_eval(const std::string& mode, long long reps, std::uint64_t seed) {
  EvalMode eval;
  eval.kind = mode == "mc" ? EvalKind::monte_carlo : EvalKind::exact;
  eval.replications = reps;
  eval.seed = seed;
  return eval;
}

// ---- ci subcommand output ----------------------------------------------

ordered_json ci_result_json(const CiResult& r, const StudyCounts& counts,
                            const CiConfig& config) {
  ordered_json diag;
  const bool scaled = r.method == CiMethod::scaled;
  const bool cs = r.method == CiMethod::cs;
  const bool pb = r.method == CiMethod::pb;
  diag["cp_lower"] = scaled ? ordered_json(r.diagnostics.cp_lower) : ordered_json(nullptr);
  diag["cp_upper"] = scaled ? ordered_json(r.diagnostics.cp_upper) : ordered_json(nullptr);
  diag["n_i_plugin"] = pb ? ordered_json(r.diagnostics.n_i_plugin) : ordered_json(nullptr);
  diag["n_i_range_lo"] = cs ? ordered_json(r.diagnostics.n_i_lo) : ordered_json(nullptr);
  diag["n_i_range_hi"] = cs ? ordered_json(r.diagnostics.n_i_hi) : ordered_json(nullptr);
  diag["endpoint_p_lower"] =
      scaled ? ordered_json(nullptr) : ordered_json(r.diagnostics.lower.p);
  diag["endpoint_p_upper"] =
      scaled ? ordered_json(nullptr) : ordered_json(r.diagnostics.upper.p);
  diag["endpoint_max_n_i_lower"] =
      cs ? ordered_json(r.diagnostics.lower.max_n_i) : ordered_json(nullptr);
  diag["endpoint_max_n_i_upper"] =
      cs ? ordered_json(r.diagnostics.upper.max_n_i) : ordered_json(nullptr);
  diag["grid_evaluations"] = r.diagnostics.scan.size();

  ordered_json j;
  j["method"] = to_string(r.method);
  j["target"] = to_string(r.target);
  j["lower"] = r.interval.lower;
  j["upper"] = r.interval.unbounded_upper ? ordered_json(nullptr)
                                          : ordered_json(r.interval.upper);
  j["unbounded_upper"] = r.interval.unbounded_upper;
  j["alpha"] = config.alpha;
  j["beta"] = config.beta;
  j["n_i_hat"] = n_infected_hat(counts);
  j["theta_hat"] = counts.n_positive > 0
                       ? ordered_json(ratio_statistic(counts.n_deaths, counts.n_positive, counts))
                       : ordered_json(nullptr);
  j["diagnostics"] = diag;
  return j;
}

void write_ci_csv(std::ostream& out, const std::vector<CiResult>& results,
                  const CiConfig& config) {
  out << "method,target,lower,upper,unbounded_upper,alpha,beta\n";
  for (const CiResult& r : results) {
    out << to_string(r.method) << ',' << to_string(r.target) << ',' << fmt_g(r.interval.lower)
        << ',' << (r.interval.unbounded_upper ? "inf" : fmt_g(r.interval.upper)) << ','
        << (r.interval.unbounded_upper ? "true" : "false") << ',' << fmt_g(config.alpha) << ','
        << fmt_g(config.beta) << '\n';
  }
}

void write_ci_table(std::ostream& out, const std::vector<CiResult>& results,
                    const StudyCounts& counts, const CiConfig& config, bool percent) {
  out << "counts: N_T=" << counts.n_total << " N_S=" << counts.n_sample
      << " N_P=" << counts.n_positive << " N_D=" << counts.n_deaths << "\n";
  out << "estimates: N_I_hat=" << fmt_g(n_infected_hat(counts)) << " theta_hat="
      << (counts.n_positive > 0
              ? fmt_rate(ratio_statistic(counts.n_deaths, counts.n_positive, counts), percent)
              : std::string("undefined"))
      << "\n";
  out << "alpha=" << fmt_g(config.alpha) << " beta=" << fmt_g(config.beta) << " mode="
      << (config.eval.kind == EvalKind::exact ? "exact" : "mc") << "\n\n";
  out << "method  target  interval\n";
  for (const CiResult& r : results) {
    out << to_string(r.method) << (r.method == CiMethod::scaled ? "  " : "      ")
        << to_string(r.target) << "  [" << fmt_rate(r.interval.lower, percent) << ", "
        << (r.interval.unbounded_upper ? "inf" : fmt_rate(r.interval.upper, percent)) << "]\n";
  }
  out << "\ndiagnostics:\n";
  for (const CiResult& r : results) {
    switch (r.method) {
      case CiMethod::scaled:
        out << "  scaled: clopper_pearson=[" << fmt_rate(r.diagnostics.cp_lower, percent) << ", "
            << fmt_rate(r.diagnostics.cp_upper, percent) << "]\n";
        break;
      case CiMethod::pb:
        out << "  pb: n_i=" << r.diagnostics.n_i_plugin << " endpoint_p=["
            << fmt_g(r.diagnostics.lower.p) << ", " << fmt_g(r.diagnostics.upper.p)
            << "] grid_evaluations=" << r.diagnostics.scan.size() << "\n";
        break;
      case CiMethod::cs:
        out << "  cs: n_i_range=[" << r.diagnostics.n_i_lo << ", " << r.diagnostics.n_i_hi
            << "] endpoint_max_n_i=[" << r.diagnostics.lower.max_n_i << ", "
            << r.diagnostics.upper.max_n_i << "] endpoint_p=[" << fmt_g(r.diagnostics.lower.p)
            << ", " << fmt_g(r.diagnostics.upper.p)
            << "] grid_evaluations=" << r.diagnostics.scan.size() << "\n";
        break;
    }
  }
}

// ---- coverage output ----------------------------------------------------

ordered_json method_coverage_json(const char* name, const MethodCoverage& m,
                                  long long evaluated, bool has_p) {
  ordered_json j;
  j["method"] = name;
  j["covered_theta1"] = m.covered_theta1;
  j["covered_theta2"] = m.covered_theta2;
  j["coverage_theta1"] =
      evaluated > 0 ? ordered_json(static_cast<double>(m.covered_theta1) / evaluated)
                    : ordered_json(nullptr);
  j["coverage_theta2"] =
      evaluated > 0 ? ordered_json(static_cast<double>(m.covered_theta2) / evaluated)
                    : ordered_json(nullptr);
  j["mean_width"] = m.width_count > 0 ? ordered_json(m.mean_width()) : ordered_json(nullptr);
  j["unbounded"] = m.unbounded;
  j["mean_endpoint_p_lower"] =
      has_p && evaluated > 0 ? ordered_json(m.lower_p_sum / evaluated) : ordered_json(nullptr);
  j["mean_endpoint_p_upper"] =
      has_p && evaluated > 0 ? ordered_json(m.upper_p_sum / evaluated) : ordered_json(nullptr);
  return j;
}

ordered_json coverage_json(const CoverageReport& rep, const PopulationSpec& spec,
                           const CiConfig& config, GenerativeModel model,
                           std::optional<double> theta2_override) {
  ordered_json j;
  j["subcommand"] = "coverage";
  j["model"] = model == GenerativeModel::population ? "population" : "binomial";
  j["n_t"] = spec.n_total;
  j["n_s"] = spec.n_sample;
  j["n_i"] = spec.n_infected;
  j["n_d_c"] = theta2_override ? ordered_json(nullptr)
                               : ordered_json(spec.n_deaths_counterfactual);
  j["theta2"] = rep.theta2;
  j["alpha"] = config.alpha;
  j["beta"] = config.beta;
  j["seed"] = spec.seed;
  j["replications"] = rep.replications;
  j["skipped"] = rep.skipped;
  j["high_skip_rate"] = rep.high_skip_rate;
  ordered_json marginals;
  marginals["n_p_mean"] = rep.n_p_mean;
  marginals["n_p_var"] = rep.n_p_var;
  marginals["n_d_mean"] = rep.n_d_mean;
  marginals["n_d_var"] = rep.n_d_var;
  marginals["corr_n_p_n_d"] = rep.corr_n_p_n_d;
  marginals["theta1_mean"] = rep.theta1_mean;
  j["marginals"] = marginals;
  j["methods"] = ordered_json::array({
      method_coverage_json("scaled", rep.scaled, rep.evaluated(), false),
      method_coverage_json("pb", rep.pb, rep.evaluated(), true),
      method_coverage_json("cs", rep.cs, rep.evaluated(), true),
  });
  return j;
}

void write_coverage_csv(std::ostream& out, const CoverageReport& rep, GenerativeModel model) {
  const char* model_name = model == GenerativeModel::population ? "population" : "binomial";
  out << "method,target,model,replications,skipped,covered,coverage_rate,mean_width\n";
  const long long evaluated = rep.evaluated();
  auto row = [&](const char* method, const char* target, long long covered,
                 const MethodCoverage& m) {
    const double rate = evaluated > 0 ? static_cast<double>(covered) / evaluated : 0.0;
    out << method << ',' << target << ',' << model_name << ',' << rep.replications << ','
        << rep.skipped << ',' << covered << ',' << fmt_g(rate) << ',' << fmt_g(m.mean_width())
        << '\n';
  };
  row("scaled", "theta1", rep.scaled.covered_theta1, rep.scaled);
  row("scaled", "theta2", rep.scaled.covered_theta2, rep.scaled);
  row("pb", "theta1", rep.pb.covered_theta1, rep.pb);
  row("pb", "theta2", rep.pb.covered_theta2, rep.pb);
  row("cs", "theta1", rep.cs.covered_theta1, rep.cs);
  row("cs", "theta2", rep.cs.covered_theta2, rep.cs);
}

void write_coverage_table(std::ostream& out, const CoverageReport& rep, GenerativeModel model) {
  const long long evaluated = rep.evaluated();
  out << "model=" << (model == GenerativeModel::population ? "population" : "binomial")
      << " replications=" << rep.replications << " skipped=" << rep.skipped
      << (rep.high_skip_rate ? " (HIGH SKIP RATE)" : "") << " theta2=" << fmt_g(rep.theta2)
      << "\n";
  out << "marginals: E[N_P]=" << fmt_g(rep.n_p_mean) << " Var[N_P]=" << fmt_g(rep.n_p_var)
      << " E[N_D]=" << fmt_g(rep.n_d_mean) << " Var[N_D]=" << fmt_g(rep.n_d_var)
      << " corr=" << fmt_g(rep.corr_n_p_n_d) << " E[theta1]=" << fmt_g(rep.theta1_mean)
      << "\n\n";
  out << "method  cover(theta1)  cover(theta2)  mean_width\n";
  auto row = [&](const char* name, const MethodCoverage& m) {
    out << name << "  "
        << (evaluated > 0 ? fmt_g(static_cast<double>(m.covered_theta1) / evaluated) : "n/a")
        << "  "
        << (evaluated > 0 ? fmt_g(static_cast<double>(m.covered_theta2) / evaluated) : "n/a")
        << "  " << fmt_g(m.mean_width()) << "\n";
  };
  row("scaled", rep.scaled);
  row("pb    ", rep.pb);
  row("cs    ", rep.cs);
}

// ---- option plumbing -----------------------------------------------------

struct Opts {
  long long nt = -1, ns = -1, np = -1, nd = -1;
  double alpha = 0.05, beta = 0.01;
  std::string method = "all", mode = "exact", model, format = "json";
  long long reps = 200000;
  std::uint64_t seed = 0;
  double theta_grid = 1e-4, endpoint_tol = 1e-6;
  long long stride = 1;
  bool verify_connected = false, percent = false;
  long long ni = -1, ndc = -1, replications = 2000;
  double theta2 = -1.0, theta0 = 0.0, at = 0.0;
  int threads = 0;
  std::string config_path;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open --config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("cannot parse --config file '" + path + "': " + e.what());
  }
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"infection fatality rate estimates and confidence intervals"};
  app.name("ifrci");
  app.require_subcommand(1);
  Opts o;

  // per-subcommand registry: config key -> option
  std::map<CLI::App*, std::map<std::string, CLI::Option*>> registry;

  auto add_counts = [&](CLI::App* sub) {
    auto& m = registry[sub];
    m["nt"] = sub->add_option("--nt", o.nt, "population size N_T");
    m["ns"] = sub->add_option("--ns,--nsample", o.ns, "sample size N_S");
    m["np"] = sub->add_option("--np", o.np, "sample positives N_P");
    m["nd"] = sub->add_option("--nd", o.nd, "observed deaths N_D");
  };
  auto add_eval = [&](CLI::App* sub) {
    auto& m = registry[sub];
    m["mode"] = sub->add_option("--mode", o.mode, "evaluation mode: exact or mc");
    m["reps"] = sub->add_option("--reps", o.reps, "Monte Carlo replications");
    m["seed"] = sub->add_option("--seed", o.seed, "random seed");
  };
  auto add_ci_config = [&](CLI::App* sub) {
    auto& m = registry[sub];
    m["alpha"] = sub->add_option("--alpha", o.alpha, "miscoverage level");
    m["beta"] = sub->add_option("--beta", o.beta, "preliminary level for the cs method");
    m["theta-grid"] = sub->add_option("--theta-grid", o.theta_grid, "theta0 scan step");
    m["endpoint-tol"] = sub->add_option("--endpoint-tol", o.endpoint_tol,
                                        "endpoint bisection tolerance");
    m["stride"] = sub->add_option("--stride", o.stride, "nuisance scan stride (cs)");
    m["verify-connected"] = sub->add_flag("--verify-connected", o.verify_connected,
                                          "full-grid check of region connectedness");
  };
  auto add_output = [&](CLI::App* sub) {
    auto& m = registry[sub];
    m["format"] = sub->add_option("--format", o.format, "output format: json, csv or table");
    m["percent"] = sub->add_flag("--percent", o.percent, "show table rates in percent");
    sub->add_option("--config", o.config_path, "JSON document with the same parameters");
  };

  CLI::App* cmd_estimate = app.add_subcommand("estimate", "point estimates N_I_hat and theta_hat");
  add_counts(cmd_estimate);
  add_output(cmd_estimate);

  CLI::App* cmd_ci = app.add_subcommand("ci", "confidence intervals for the IFR");
  add_counts(cmd_ci);
  registry[cmd_ci]["method"] = cmd_ci->add_option("--method", o.method, "scaled, pb, cs or all");
  add_ci_config(cmd_ci);
  add_eval(cmd_ci);
  add_output(cmd_ci);

  CLI::App* cmd_gcdf = app.add_subcommand("gcdf", "CDF of the ratio statistic at a point");
  {
    auto& m = registry[cmd_gcdf];
    m["nt"] = cmd_gcdf->add_option("--nt", o.nt, "population size N_T");
    m["ns"] = cmd_gcdf->add_option("--ns,--nsample", o.ns, "sample size N_S");
    m["ni"] = cmd_gcdf->add_option("--ni", o.ni, "hypothesized infection count n_I");
    m["theta0"] = cmd_gcdf->add_option("--theta0", o.theta0, "hypothesized IFR theta0");
    m["at"] = cmd_gcdf->add_option("--at", o.at, "evaluation point c");
  }
  add_eval(cmd_gcdf);
  add_output(cmd_gcdf);

  CLI::App* cmd_cov = app.add_subcommand("coverage", "Monte Carlo coverage experiment");
  {
    auto& m = registry[cmd_cov];
    m["nt"] = cmd_cov->add_option("--nt", o.nt, "population size N_T");
    m["ns"] = cmd_cov->add_option("--ns,--nsample", o.ns, "sample size N_S");
    m["ni"] = cmd_cov->add_option("--ni", o.ni, "conditioning infection count N_I");
    m["ndc"] = cmd_cov->add_option("--ndc", o.ndc, "counterfactual death count N_D,C");
    m["theta2"] = cmd_cov->add_option("--theta2", o.theta2,
                                      "death rate theta2 (binomial model only)");
    m["model"] = cmd_cov->add_option("--model", o.model, "population or binomial");
    m["replications"] = cmd_cov->add_option("--replications", o.replications,
                                            "number of replicates");
    m["threads"] = cmd_cov->add_option("--threads", o.threads, "worker threads (0 = hardware)");
  }
  add_ci_config(cmd_cov);
  add_eval(cmd_cov);
  add_output(cmd_cov);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const auto& opt = registry[sub];
    json cfg = json::object();
    if (!o.config_path.empty()) cfg = load_config(o.config_path);

    auto given = [&](const char* key) {
      auto it = opt.find(key);
      return (it != opt.end() && it->second->count() > 0) || cfg.contains(key);
    };
    auto merge = [&](const char* key, auto& var) {
      auto it = opt.find(key);
      const bool from_flag = it != opt.end() && it->second->count() > 0;
      if (!from_flag && cfg.contains(key)) cfg.at(key).get_to(var);
    };
    auto require = [&](const char* key) {
      if (!given(key)) throw UsageError(std::string("missing required option --") + key);
    };

    merge("nt", o.nt);
    merge("ns", o.ns);
    merge("np", o.np);
    merge("nd", o.nd);
    merge("alpha", o.alpha);
    merge("beta", o.beta);
    merge("method", o.method);
    merge("mode", o.mode);
    merge("reps", o.reps);
    merge("seed", o.seed);
    merge("theta-grid", o.theta_grid);
    merge("endpoint-tol", o.endpoint_tol);
    merge("stride", o.stride);
    merge("verify-connected", o.verify_connected);
    merge("format", o.format);
    merge("percent", o.percent);
    merge("ni", o.ni);
    merge("ndc", o.ndc);
    merge("theta2", o.theta2);
    merge("model", o.model);
    merge("replications", o.replications);
    merge("threads", o.threads);
    merge("theta0", o.theta0);
    merge("at", o.at);

    check_choice(o.format, {"json", "csv", "table"}, "--format");
    check_choice(o.mode, {"exact", "mc"}, "--mode");

    CiConfig config;
    config.alpha = o.alpha;
    config.beta = o.beta;
    config.eval = make_eval(o.mode, o.reps, o.seed);
    config.theta_grid_step = o.theta_grid;
    config.endpoint_tol = o.endpoint_tol;
    config.n_i_stride = o.stride;
    config.verify_connected = o.verify_connected;

    const std::string name = sub->get_name();
    if (name == "estimate") {
      require("nt"); require("ns"); require("np"); require("nd");
      const StudyCounts counts{o.nt, o.ns, o.np, o.nd};
      const Estimates est = estimate(counts);  // throws NoPositivesError when N_P = 0
      if (o.format == "json") {
        ordered_json j;
        j["subcommand"] = "estimate";
        j["n_t"] = counts.n_total;
        j["n_s"] = counts.n_sample;
        j["n_p"] = counts.n_positive;
        j["n_d"] = counts.n_deaths;
        j["n_i_hat"] = est.n_infected_hat;
        j["theta_hat"] = est.theta_hat;
        out << j.dump(2) << "\n";
      } else if (o.format == "csv") {
        out << "n_t,n_s,n_p,n_d,n_i_hat,theta_hat\n"
            << counts.n_total << ',' << counts.n_sample << ',' << counts.n_positive << ','
            << counts.n_deaths << ',' << fmt_g(est.n_infected_hat) << ','
            << fmt_g(est.theta_hat) << "\n";
      } else {
        out << "N_I_hat = " << fmt_g(est.n_infected_hat) << "\n"
            << "theta_hat = " << fmt_rate(est.theta_hat, o.percent) << "\n";
      }
      return 0;
    }

    if (name == "ci") {
      require("nt"); require("ns"); require("np"); require("nd");
      check_choice(o.method, {"scaled", "pb", "cs", "all"}, "--method");
      const StudyCounts counts{o.nt, o.ns, o.np, o.nd};
      std::vector<CiResult> results;
      if (o.method == "scaled" || o.method == "all") results.push_back(ci_scaled(counts, config));
      if (o.method == "pb" || o.method == "all") results.push_back(ci_pb(counts, config));
      if (o.method == "cs" || o.method == "all") results.push_back(ci_cs(counts, config));
      if (o.format == "json") {
        if (results.size() == 1) {
          out << ci_result_json(results.front(), counts, config).dump(2) << "\n";
        } else {
          ordered_json arr = ordered_json::array();
          for (const CiResult& r : results) arr.push_back(ci_result_json(r, counts, config));
          out << arr.dump(2) << "\n";
        }
      } else if (o.format == "csv") {
        write_ci_csv(out, results, config);
      } else {
        write_ci_table(out, results, counts, config, o.percent);
      }
      return 0;
    }

    if (name == "gcdf") {
      require("nt"); require("ns"); require("ni"); require("theta0"); require("at");
      const StudyCounts counts{o.nt, o.ns, 0, 0};
      const ModelPoint point{o.ni, o.theta0};
      const bool mc = o.mode == "mc";
      const double value = mc ? g_cdf_mc(o.at, point, counts, config.eval)
                              : g_cdf_exact(o.at, point, counts);
      if (o.format == "json") {
        ordered_json j;
        j["subcommand"] = "gcdf";
        j["n_t"] = counts.n_total;
        j["n_sample"] = counts.n_sample;
        j["n_i"] = point.n_infected;
        j["theta0"] = point.theta0;
        j["at"] = o.at;
        j["mode"] = o.mode;
        j["replications"] = mc ? ordered_json(config.eval.replications) : ordered_json(nullptr);
        j["seed"] = mc ? ordered_json(config.eval.seed) : ordered_json(nullptr);
        j["value"] = value;
        out << j.dump(2) << "\n";
      } else if (o.format == "csv") {
        out << "n_t,n_sample,n_i,theta0,at,mode,value\n"
            << counts.n_total << ',' << counts.n_sample << ',' << point.n_infected << ','
            << fmt_g(point.theta0) << ',' << fmt_g(o.at) << ',' << o.mode << ',' << fmt_g(value)
            << "\n";
      } else {
        out << "G(" << fmt_g(o.at) << " | n_I=" << point.n_infected
            << ", theta0=" << fmt_g(point.theta0) << ") = " << fmt_g(value) << "\n";
      }
      return 0;
    }

    // coverage
    require("nt"); require("ns"); require("ni"); require("model");
    check_choice(o.model, {"population", "binomial"}, "--model");
    const GenerativeModel model =
        o.model == "population" ? GenerativeModel::population : GenerativeModel::binomial;
    const bool have_ndc = given("ndc");
    const bool have_theta2 = given("theta2");
    if (have_ndc && have_theta2) throw UsageError("--ndc and --theta2 are mutually exclusive");
    if (model == GenerativeModel::population && !have_ndc)
      throw UsageError("missing required option --ndc (population model)");
    if (!have_ndc && !have_theta2)
      throw UsageError("missing required option --ndc or --theta2");
    std::optional<double> theta2_override;
    if (have_theta2) {
      if (model != GenerativeModel::binomial)
        throw UsageError("--theta2 applies to the binomial model only");
      theta2_override = o.theta2;
    }
    PopulationSpec spec;
    spec.n_total = o.nt;
    spec.n_sample = o.ns;
    spec.n_infected = o.ni;
    spec.n_deaths_counterfactual = have_ndc ? o.ndc : 0;
    spec.replications = o.replications;
    spec.seed = o.seed;
    const CoverageReport rep = coverage_experiment(spec, config, model, o.threads,
                                                   theta2_override);
    if (o.format == "json") {
      out << coverage_json(rep, spec, config, model, theta2_override).dump(2) << "\n";
    } else if (o.format == "csv") {
      write_coverage_csv(out, rep, model);
    } else {
      write_coverage_table(out, rep, model);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoPositivesError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ifrci::cli
