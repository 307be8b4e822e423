#include "aoicap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aoicap/region.hpp"

namespace aoicap {

const char* problem_kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::min_aoi_hard: return "min_aoi_hard";
    case ProblemKind::cost_soft: return "cost_soft";
    case ProblemKind::prop_fair: return "prop_fair";
    case ProblemKind::admission: return "admission";
  }
  return "?";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "min_aoi_hard") return ProblemKind::min_aoi_hard;
  if (name == "cost_soft") return ProblemKind::cost_soft;
  if (name == "prop_fair") return ProblemKind::prop_fair;
  if (name == "admission") return ProblemKind::admission;
  throw std::invalid_argument("unknown problem: " + name);
}

int64_t default_horizon(int n_devices) { return 100000LL * n_devices; }

namespace {

NetworkConfig ramp_network(int n, int m) {
  NetworkConfig cfg;
  cfg.n_devices = n;
  cfg.n_slots_per_round = m;
  cfg.success_probs.resize(n);
  for (int i = 0; i < n; ++i) cfg.success_probs[i] = static_cast<double>(i + 1) / n;
  validate_config(cfg);
  return cfg;
}

void finish(Scenario& sc) {
  sc.horizon = default_horizon(sc.cfg.n_devices);
}

}  // namespace

Scenario build_example1(int n, int m, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  Scenario sc;
  sc.cfg = ramp_network(n, m);
  sc.problem = ProblemKind::min_aoi_hard;
  sc.lambda = lambda;
  sc.q.resize(n);
  for (int i = 0; i < n; ++i) sc.q[i] = lambda * sc.cfg.success_probs[i] / n;
  finish(sc);
  return sc;
}

Scenario build_example2(int n, int m, double lambda, Ex2Variant variant) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  Scenario sc;
  sc.problem = ProblemKind::cost_soft;
  sc.lambda = lambda;
  if (variant == Ex2Variant::lambda_sweep) {
    sc.cfg.n_devices = n;
    sc.cfg.n_slots_per_round = m;
    sc.cfg.success_probs.assign(n, 0.8);
    validate_config(sc.cfg);
    sc.q.resize(n);
    for (int i = 0; i < n; ++i) {
      const double p = sc.cfg.success_probs[i];
      const double tier = (i + 1) <= 0.5 * n ? 1.6 : 0.4;
      sc.q[i] = lambda * tier * p * m / n;
    }
  } else {
    sc.cfg = ramp_network(n, m);
    sc.q.resize(n);
    for (int i = 0; i < n; ++i) sc.q[i] = lambda * sc.cfg.success_probs[i] / n;
  }
  finish(sc);
  return sc;
}

Scenario build_example3(int n, int m) {
  Scenario sc;
  sc.cfg = ramp_network(n, m);
  sc.problem = ProblemKind::prop_fair;
  finish(sc);
  return sc;
}

Scenario build_example4(double f, double g) {
  if (!(f >= 1.0) || !(g >= 1.0)) throw std::invalid_argument("AoI ceilings must be >= 1");
  Scenario sc;
  sc.cfg.n_devices = 10;
  sc.cfg.n_slots_per_round = 1;
  sc.cfg.success_probs.assign(10, 0.8);
  sc.problem = ProblemKind::admission;
  sc.e.resize(10);
  for (int i = 0; i < 10; ++i) sc.e[i] = i < 5 ? f : g;
  finish(sc);
  return sc;
}

SolverResult solve_scenario(const Scenario& sc, const SolverOptions& opts) {
  switch (sc.problem) {
    case ProblemKind::min_aoi_hard:
      return solve_min_aoi_hard(sc.cfg, sc.q, opts);
    case ProblemKind::cost_soft:
      return solve_cost_soft(sc.cfg, sc.q, opts);
    case ProblemKind::prop_fair:
      return solve_prop_fair(sc.cfg, opts);
    case ProblemKind::admission: {
      AdmissionResult adm = check_admission(sc.cfg, sc.e, opts);
      if (!adm.feasible) throw InfeasibleProblem("AoI ceilings not admissible");
      SolverResult res = adm.diagnostics;
      res.point = adm.witness;
      res.objective = adm.max_phi;
      return res;
    }
  }
  throw std::invalid_argument("unknown problem kind");
}

double empirical_objective(const Scenario& sc, const TraceMetrics& m) {
  const int n = sc.cfg.n_devices;
  switch (sc.problem) {
    case ProblemKind::min_aoi_hard: {
      double total = 0.0;
      for (int i = 0; i < n; ++i) total += m.emp_aoi[i];
      return total;
    }
    case ProblemKind::cost_soft: {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = sc.q[i] - m.emp_throughput[i];
        total += (v > 0.0 ? v * v : 0.0) + m.emp_aoi[i];
      }
      return total;
    }
    case ProblemKind::prop_fair: {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        // plug-in floor: a zero-delivery trace contributes as half a delivery
        const double thr = std::max(m.emp_throughput[i], 0.5 / static_cast<double>(m.horizon));
        total += std::log(thr) - std::log(m.emp_aoi[i]);
      }
      return total;
    }
    case ProblemKind::admission: {
      double worst = -1e300;
      for (int i = 0; i < n; ++i) worst = std::max(worst, m.emp_aoi[i] - sc.e[i]);
      return worst;
    }
  }
  throw std::invalid_argument("unknown problem kind");
}

namespace {

std::vector<std::string> default_policies(ProblemKind family) {
  switch (family) {
    case ProblemKind::min_aoi_hard: return {"vwd", "maxweight"};
    case ProblemKind::cost_soft: return {"vwd", "maxweight"};
    case ProblemKind::prop_fair: return {"vwd", "random"};
    case ProblemKind::admission: return {"vwd"};
  }
  return {"vwd"};
}

Scenario scenario_at(const SweepRequest& req, double g) {
  switch (req.family) {
    case ProblemKind::min_aoi_hard: {
      const int m = static_cast<int>(std::lround(g));
      return build_example1(req.ratio * m, m, req.lambda);
    }
    case ProblemKind::cost_soft: {
      if (req.sweep_var == "lambda") {
        return build_example2(req.n, 1, g, Ex2Variant::lambda_sweep);
      }
      const int m = static_cast<int>(std::lround(g));
      return build_example2(req.ratio * m, m, req.lambda, Ex2Variant::ratio_sweep);
    }
    case ProblemKind::prop_fair: {
      const int m = static_cast<int>(std::lround(g));
      return build_example3(req.n, m);
    }
    case ProblemKind::admission:
      throw std::invalid_argument("admission sweeps use admission_boundary");
  }
  throw std::invalid_argument("unknown family");
}

SweepRow empirical_row(const Scenario& sc, const std::string& policy_name,
                       const PolicySpec& spec, double sweep_var) {
  SweepRow row;
  row.sweep_var = sweep_var;
  row.policy = policy_name;
  const std::vector<TraceMetrics> traces = run_ensemble_traces(
      sc.cfg, spec, sc.horizon, sc.n_traces, sc.base_seed);
  double sum = 0.0, sumsq = 0.0;
  for (const TraceMetrics& t : traces) {
    const double v = empirical_objective(sc, t);
    sum += v;
    sumsq += v * v;
  }
  const int k = static_cast<int>(traces.size());
  row.objective_mean = sum / k;
  if (k > 1) {
    double var = (sumsq - sum * sum / k) / (k - 1);
    row.objective_se = std::sqrt(std::max(var, 0.0) / k);
  }
  const EnsembleMetrics agg = aggregate(traces);
  row.mu_hat = agg.mean_throughput;
  row.sigma2_hat = agg.mean_variance;
  row.aoi_hat = agg.mean_aoi;
  return row;
}

}  // namespace

SweepTable run_sweep(const SweepRequest& req, const SolverOptions& opts) {
  if (req.grid.empty()) throw std::invalid_argument("sweep grid is empty");
  SweepTable table;

  if (req.family == ProblemKind::admission) {
    const std::vector<BoundaryPoint> boundary = admission_boundary(req.grid, opts);
    for (const BoundaryPoint& b : boundary) {
      SweepRow row;
      row.sweep_var = b.f;
      row.policy = "boundary_g";
      row.objective_mean = b.g_min;
      if (!b.feasible) row.error = "infeasible at every g";
      table.rows.push_back(std::move(row));
    }
    return table;
  }

  const std::vector<std::string> policies =
      req.policies.empty() ? default_policies(req.family) : req.policies;

  for (size_t g = 0; g < req.grid.size(); ++g) {
    Scenario sc = scenario_at(req, req.grid[g]);
    if (req.horizon > 0) sc.horizon = req.horizon;
    if (req.n_traces > 0) sc.n_traces = req.n_traces;
    sc.base_seed = req.base_seed + 10007 * static_cast<uint64_t>(g);
    const double sweep_var = req.grid[g];

    SolverResult sol;
    std::string solver_error;
    try {
      sol = solve_scenario(sc, opts);
    } catch (const std::exception& ex) {
      solver_error = ex.what();
    }

    SweepRow theo;
    theo.sweep_var = sweep_var;
    theo.policy = "theoretical";
    if (solver_error.empty()) {
      theo.objective_mean = sol.objective;
      theo.mu_hat = sol.point.mu;
      theo.sigma2_hat = sol.point.sigma2;
      theo.aoi_hat.resize(sc.cfg.n_devices);
      for (int i = 0; i < sc.cfg.n_devices; ++i) {
        theo.aoi_hat[i] = aoi_approx(sol.point.mu[i], sol.point.sigma2[i]);
      }
    } else {
      theo.error = solver_error;
    }
    table.rows.push_back(std::move(theo));

    for (const std::string& name : policies) {
      const PolicyKind kind = policy_kind_from_string(name);
      if (kind == PolicyKind::vwd && !solver_error.empty()) {
        SweepRow row;
        row.sweep_var = sweep_var;
        row.policy = name;
        row.error = "no targets: " + solver_error;
        table.rows.push_back(std::move(row));
        continue;
      }
      PolicySpec spec;
      switch (kind) {
        case PolicyKind::vwd: spec = PolicySpec::vwd(sol.point); break;
        case PolicyKind::maxweight:
          spec = PolicySpec::maxweight(sc.q.empty() ? std::vector<double>(sc.cfg.n_devices, 0.0)
                                                    : sc.q);
          break;
        case PolicyKind::random_uniform: spec = PolicySpec::random(); break;
      }
      try {
        table.rows.push_back(empirical_row(sc, name, spec, sweep_var));
      } catch (const std::exception& ex) {
        SweepRow row;
        row.sweep_var = sweep_var;
        row.policy = name;
        row.error = ex.what();
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::vector<BoundaryPoint> admission_boundary(std::span<const double> f_grid,
                                              const SolverOptions& opts, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be > 0");
  std::vector<BoundaryPoint> points;
  points.reserve(f_grid.size());
  const double g_max = 200.0;
  for (double f : f_grid) {
    BoundaryPoint pt;
    pt.f = f;
    auto feasible_at = [&](double g) {
      const Scenario sc = build_example4(f, g);
      return check_admission(sc.cfg, sc.e, opts).feasible;
    };
    if (!feasible_at(g_max)) {
      points.push_back(pt);
      continue;
    }
    double lo = 1.0, hi = g_max;
    if (feasible_at(lo)) {
      hi = lo;
    } else {
      while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (feasible_at(mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
    }
    pt.feasible = true;
    pt.g_min = hi;
    points.push_back(pt);
  }
  return points;
}

std::vector<double> ex4_f_grid() {
  std::vector<double> grid(10);
  for (int k = 0; k < 10; ++k) grid[k] = 6.0 + k * (24.0 - 6.0) / 9.0;
  return grid;
}

}  // namespace aoicap
