// aoicap command-line front end: solve the four benchmark problems, simulate
// scheduling policies, run experiment sweeps, check region membership and
// compare inter-delivery CDFs. Machine-readable output goes to --out (or
// stdout); human-readable notes go to stderr.

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "aoicap/analysis.hpp"
#include "aoicap/experiments.hpp"
#include "aoicap/serialize.hpp"

namespace {

using namespace aoicap;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct GlobalOpts {
  uint64_t seed = 1;
  int64_t horizon = 0;  // 0 -> scenario default
  int traces = 0;       // 0 -> scenario default
  std::string out = "-";
  std::string format = "json";
};

void emit(const GlobalOpts& g, const std::string& text) {
  if (g.out == "-" || g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(g.out, text);
    std::cerr << "wrote " << g.out << "\n";
  }
}

// Scenario selection shared by solve/simulate/cdf.
struct ScenarioArgs {
  std::string scenario;  // ex1..ex4
  std::string config_path;
  int n = 10;
  int m = 1;
  double lambda = 0.9;
  std::string variant = "lambda";  // ex2: lambda | ratio
  double f = 12.0;
  double g = 12.0;
  std::vector<double> p_override;
  std::vector<double> q_override;
  std::vector<double> e_override;

  void attach(CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "Scenario family: ex1|ex2|ex3|ex4")
        ->check(CLI::IsMember({"ex1", "ex2", "ex3", "ex4"}));
    cmd->add_option("--config", config_path, "Scenario JSON file (overrides --scenario)");
    cmd->add_option("--n", n, "Device count N");
    cmd->add_option("--m", m, "Devices scheduled per slot M");
    cmd->add_option("--lambda", lambda, "Load factor for the throughput requirements");
    cmd->add_option("--variant", variant, "ex2 variant: lambda|ratio")
        ->check(CLI::IsMember({"lambda", "ratio"}));
    cmd->add_option("--f", f, "ex4 AoI ceiling for devices 1..5");
    cmd->add_option("--g", g, "ex4 AoI ceiling for devices 6..10");
    cmd->add_option("--p", p_override, "Override success probabilities (comma separated)")
        ->delimiter(',');
    cmd->add_option("--q", q_override, "Override throughput requirements (comma separated)")
        ->delimiter(',');
    cmd->add_option("--e", e_override, "Override AoI ceilings (comma separated)")
        ->delimiter(',');
  }

  Scenario build(const GlobalOpts& g_opts) const {
    Scenario sc;
    if (!config_path.empty()) {
      sc = load_json_file(config_path).get<Scenario>();
    } else if (scenario == "ex1") {
      sc = build_example1(n, m, lambda);
    } else if (scenario == "ex2") {
      sc = build_example2(n, m, lambda,
                          variant == "ratio" ? Ex2Variant::ratio_sweep : Ex2Variant::lambda_sweep);
    } else if (scenario == "ex3") {
      sc = build_example3(n, m);
    } else if (scenario == "ex4") {
      sc = build_example4(f, g);
    } else {
      throw CLI::ValidationError("--scenario or --config is required");
    }
    if (!p_override.empty()) {
      sc.cfg.success_probs = p_override;
      sc.cfg.n_devices = static_cast<int>(p_override.size());
    }
    if (!q_override.empty()) sc.q = q_override;
    if (!e_override.empty()) sc.e = e_override;
    validate_config(sc.cfg);
    if (g_opts.horizon > 0) sc.horizon = g_opts.horizon;
    if (g_opts.traces > 0) sc.n_traces = g_opts.traces;
    sc.base_seed = g_opts.seed;
    return sc;
  }
};

int cmd_solve(const GlobalOpts& g, const ScenarioArgs& args, const SolverOptions& sopts) {
  const Scenario sc = args.build(g);
  if (sc.problem == ProblemKind::admission) {
    const AdmissionResult res = check_admission(sc.cfg, sc.e, sopts);
    json j;
    to_json(j, res);
    emit(g, j.dump(2));
    return res.feasible ? kExitOk : kExitInfeasible;
  }
  const SolverResult res = solve_scenario(sc, sopts);
  json j;
  to_json(j, res);
  // long-term scheduling fractions r_i = mu_i / p_i, diagnostic only
  std::vector<double> fractions(sc.cfg.n_devices);
  for (int i = 0; i < sc.cfg.n_devices; ++i) {
    fractions[i] = res.point.mu[i] / sc.cfg.success_probs[i];
  }
  j["schedule_fraction"] = fractions;
  emit(g, j.dump(2));
  return kExitOk;
}

PolicySpec policy_spec_for(const std::string& policy, const Scenario& sc,
                           const std::string& targets_path, double v_param,
                           const SolverOptions& sopts) {
  const PolicyKind kind = policy_kind_from_string(policy);
  switch (kind) {
    case PolicyKind::vwd: {
      SecondOrderPoint targets;
      if (!targets_path.empty()) {
        // accept either a bare SecondOrderPoint or a solver-result file
        const json j = load_json_file(targets_path);
        targets = (j.contains("point") ? j.at("point") : j).get<SecondOrderPoint>();
      } else {
        targets = solve_scenario(sc, sopts).point;
      }
      return PolicySpec::vwd(std::move(targets));
    }
    case PolicyKind::maxweight: {
      std::vector<double> q = sc.q;
      if (q.empty()) q.assign(sc.cfg.n_devices, 0.0);
      return PolicySpec::maxweight(std::move(q), v_param);
    }
    case PolicyKind::random_uniform:
      return PolicySpec::random();
  }
  throw CLI::ValidationError("unknown policy");
}

int cmd_simulate(const GlobalOpts& g, const ScenarioArgs& args, const std::string& policy,
                 const std::string& targets_path, double v_param, const SolverOptions& sopts) {
  const Scenario sc = args.build(g);
  const PolicySpec spec = policy_spec_for(policy, sc, targets_path, v_param, sopts);
  const EnsembleMetrics metrics =
      run_ensemble(sc.cfg, spec, sc.horizon, sc.n_traces, sc.base_seed);
  if (g.format == "json") {
    json j;
    to_json(j, metrics);
    emit(g, j.dump(2));
  } else {
    emit(g, ensemble_csv(metrics));
  }
  return kExitOk;
}

int cmd_sweep(const GlobalOpts& g, SweepRequest req, const SolverOptions& sopts) {
  if (req.horizon == 0 && g.horizon > 0) req.horizon = g.horizon;
  if (g.traces > 0) req.n_traces = g.traces;
  req.base_seed = g.seed;
  if (req.family == ProblemKind::admission && req.grid.empty()) req.grid = ex4_f_grid();
  const SweepTable table = run_sweep(req, sopts);
  if (g.format == "json") {
    json j;
    to_json(j, table);
    emit(g, j.dump(2));
  } else {
    emit(g, sweep_csv(table));
    if (g.out != "-" && !g.out.empty()) {
      write_text_file(g.out + ".sidecar.json", sweep_sidecar(table).dump(2));
      std::cerr << "wrote " << g.out << ".sidecar.json\n";
    }
  }
  return kExitOk;
}

int cmd_region(const GlobalOpts& g, const std::string& point_path, const std::string& pairs_path,
               const std::string& network_path, const std::string& bound, double eps,
               bool empirical) {
  const json point_json = load_json_file(point_path);
  const SecondOrderPoint candidate = point_json.get<SecondOrderPoint>();
  const TargetPairs pairs = load_json_file(pairs_path).get<TargetPairs>();
  NetworkConfig cfg;
  if (!network_path.empty()) {
    cfg = load_json_file(network_path).get<NetworkConfig>();
  } else if (point_json.contains("network")) {
    cfg = point_json.at("network").get<NetworkConfig>();
  } else {
    throw CLI::ValidationError("need --network or a \"network\" field in the point file");
  }
  const RegionTolerances tol = empirical ? RegionTolerances::empirical() : RegionTolerances{};
  const RegionCheckReport rep = bound == "inner"
                                    ? check_inner(pairs, candidate, cfg, eps, {}, tol)
                                    : check_outer(pairs, candidate, cfg, {}, tol);
  json j;
  to_json(j, rep);
  emit(g, j.dump(2));
  return kExitOk;
}

int cmd_cdf(const GlobalOpts& g, const ScenarioArgs& args, int device, int64_t x_max,
            const SolverOptions& sopts) {
  const Scenario sc = args.build(g);
  const SolverResult sol = solve_scenario(sc, sopts);
  const PolicySpec spec = PolicySpec::vwd(sol.point);
  const EnsembleMetrics metrics =
      run_ensemble(sc.cfg, spec, sc.horizon, sc.n_traces, sc.base_seed);

  int dev = device;
  if (dev < 0) {
    // device with the largest AoI approximation error
    double worst = -1.0;
    for (int i = 0; i < sc.cfg.n_devices; ++i) {
      const double approx = aoi_approx(sol.point.mu[i], sol.point.sigma2[i]);
      const double err = std::abs(metrics.mean_aoi[i] - approx);
      if (err > worst) {
        worst = err;
        dev = i;
      }
    }
    std::cerr << "worst-approximated device: " << dev << "\n";
  }
  if (dev < 0 || dev >= sc.cfg.n_devices) throw CLI::ValidationError("--device out of range");

  const EmpiricalCdf emp = EmpiricalCdf::from_histogram(metrics.interdelivery[dev]);
  const IgFit fit = fit_inverse_gaussian(sol.point.mu[dev], sol.point.sigma2[dev]);
  const int64_t top = x_max > 0 ? x_max : emp.max_value();
  std::vector<CdfComparisonRow> rows;
  rows.reserve(static_cast<size_t>(top));
  for (int64_t k = 1; k <= top; ++k) {
    rows.push_back({k, emp(static_cast<double>(k)),
                    inverse_gaussian_cdf(static_cast<double>(k), fit.mean, fit.shape)});
  }
  emit(g, cdf_comparison_csv(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"throughput-AoI capacity region toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Base RNG seed");
  app.add_option("--horizon", g.horizon, "Trace length in slots (0 = scenario default)");
  app.add_option("--traces", g.traces, "Traces per ensemble (0 = scenario default)");
  app.add_option("--out", g.out, "Output file, '-' for stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  SolverOptions sopts;
  app.add_option("--eps", sopts.eps, "Inner-bound strictness");
  app.add_option("--starts", sopts.n_starts, "Solver multi-start count");

  ScenarioArgs solve_args, sim_args, cdf_args;

  CLI::App* solve = app.add_subcommand("solve", "Solve a scenario's optimization problem");
  solve_args.attach(solve);

  CLI::App* simulate = app.add_subcommand("simulate", "Run a policy ensemble on a scenario");
  sim_args.attach(simulate);
  std::string policy = "vwd";
  std::string targets_path;
  double v_param = -1.0;
  simulate->add_option("--policy", policy, "vwd|maxweight|random")
      ->check(CLI::IsMember({"vwd", "maxweight", "random"}));
  simulate->add_option("--targets", targets_path, "SecondOrderPoint JSON for the VWD targets");
  simulate->add_option("--v", v_param, "Max-Weight V parameter (default N^2)");

  CLI::App* sweep = app.add_subcommand("sweep", "Run an experiment family over a grid");
  std::string family = "min_aoi_hard";
  SweepRequest req;
  sweep->add_option("--family", family, "min_aoi_hard|cost_soft|prop_fair|admission");
  sweep->add_option("--sweep-var", req.sweep_var, "m|lambda|f");
  sweep->add_option("--grid", req.grid, "Grid values (comma separated)")->delimiter(',');
  sweep->add_option("--policies", req.policies, "Policies to simulate")->delimiter(',');
  sweep->add_option("--n", req.n, "Fixed N (lambda sweeps, prop_fair)");
  sweep->add_option("--ratio", req.ratio, "N/M ratio (M sweeps)");
  sweep->add_option("--lambda", req.lambda, "Load factor for M sweeps");
  std::string ex2_variant = "lambda";
  sweep->add_option("--variant", ex2_variant, "ex2 variant: lambda|ratio")
      ->check(CLI::IsMember({"lambda", "ratio"}));

  CLI::App* region = app.add_subcommand("region", "Check a point against the capacity bounds");
  std::string point_path, pairs_path, network_path, bound = "inner";
  bool empirical = false;
  region->add_option("--point", point_path, "SecondOrderPoint JSON")->required();
  region->add_option("--pairs", pairs_path, "TargetPairs JSON")->required();
  region->add_option("--network", network_path, "NetworkConfig JSON");
  region->add_option("--bound", bound, "inner|outer")->check(CLI::IsMember({"inner", "outer"}));
  region->add_flag("--empirical", empirical, "Use statistical equality tolerances (1e-2)");

  CLI::App* cdf = app.add_subcommand("cdf", "Inter-delivery CDF vs fitted inverse Gaussian");
  cdf_args.attach(cdf);
  int device = -1;
  int64_t x_max = 0;
  cdf->add_option("--device", device, "Device index (default: worst-approximated)");
  cdf->add_option("--xmax", x_max, "Largest integer point to compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(g, solve_args, sopts);
    if (*simulate) return cmd_simulate(g, sim_args, policy, targets_path, v_param, sopts);
    if (*sweep) {
      req.family = problem_kind_from_string(family);
      req.ex2_variant =
          ex2_variant == "ratio" ? Ex2Variant::ratio_sweep : Ex2Variant::lambda_sweep;
      if (req.sweep_var.empty()) {
        req.sweep_var = req.family == ProblemKind::cost_soft ? "lambda" : "m";
      }
      return cmd_sweep(g, req, sopts);
    }
    if (*region) return cmd_region(g, point_path, pairs_path, network_path, bound, sopts.eps,
                                   empirical);
    if (*cdf) return cmd_cdf(g, cdf_args, device, x_max, sopts);
  } catch (const InfeasibleProblem& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
