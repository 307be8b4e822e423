#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aoicap/core.hpp"
#include "aoicap/simulator.hpp"
#include "aoicap/solvers.hpp"

namespace aoicap {

enum class ProblemKind { min_aoi_hard, cost_soft, prop_fair, admission };

const char* problem_kind_name(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

// A runnable experiment instance: network, problem, problem parameters and
// execution budget. Serializable (schema_version 1).
struct Scenario {
  NetworkConfig cfg;
  ProblemKind problem = ProblemKind::min_aoi_hard;
  std::vector<double> q;  // throughput requirements (min_aoi_hard, cost_soft)
  std::vector<double> e;  // AoI ceilings (admission)
  double lambda = 0.0;    // recorded load factor used to build q
  int64_t horizon = 0;
  int n_traces = 50;
  uint64_t base_seed = 1;
};

// Desk-scale default: 1e5 * N slots (the reference setting is 1e6 * N).
int64_t default_horizon(int n_devices);

// p_i = i/N, q_i = lambda * p_i / N.
Scenario build_example1(int n, int m, double lambda = 0.9);

enum class Ex2Variant { lambda_sweep, ratio_sweep };
// lambda_sweep: p_i = 0.8, q_i = lambda * gamma_i with the two-tier gamma
// (1.6 p M/N for i <= N/2, else 0.4 p M/N). ratio_sweep: example-1 network.
Scenario build_example2(int n, int m, double lambda, Ex2Variant variant);

// Proportional fairness with p_i = i/N.
Scenario build_example3(int n, int m);

// N=10, M=1, p=0.8; e_i = f for the first five devices, g for the rest.
Scenario build_example4(double f, double g);

// Solves the scenario's problem (admission scenarios report via diagnostics).
SolverResult solve_scenario(const Scenario& sc, const SolverOptions& opts = {});

// Objective of one simulated trace under the scenario's problem. For
// admission scenarios this is the worst AoI-ceiling violation (<= 0 is good).
double empirical_objective(const Scenario& sc, const TraceMetrics& m);

struct SweepRow {
  double sweep_var = 0.0;
  std::string policy;  // "theoretical" | "vwd" | "maxweight" | "random"
  double objective_mean = 0.0;
  double objective_se = 0.0;
  std::vector<double> mu_hat;      // per-device throughput (targets for theoretical)
  std::vector<double> sigma2_hat;  // per-device temporal variance
  std::vector<double> aoi_hat;     // per-device average AoI
  std::string error;               // nonempty marks a failed cell
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

struct SweepRequest {
  ProblemKind family = ProblemKind::min_aoi_hard;
  std::string sweep_var;              // "m" | "lambda" | "f"
  std::vector<double> grid;
  std::vector<std::string> policies;  // empirical policies; defaults per family
  int n = 0;                          // fixed N (ex2 lambda sweep, ex3)
  int ratio = 0;                      // N/M (ex1, ex2 ratio sweep)
  double lambda = 0.9;
  Ex2Variant ex2_variant = Ex2Variant::lambda_sweep;
  int64_t horizon = 0;  // 0 -> scenario default
  int n_traces = 50;
  uint64_t base_seed = 1;
};

// One theoretical row plus one row per requested policy at every grid point.
// Seeds are derived as base_seed + 10007 * grid_index, so grid points can run
// in any order. Admission sweeps emit the feasibility boundary instead.
SweepTable run_sweep(const SweepRequest& req, const SolverOptions& opts = {});

// Example-4 boundary: smallest feasible g for each f, by bisection on
// check_admission at the given resolution. g_min < 0 marks an infeasible f.
struct BoundaryPoint {
  double f = 0.0;
  double g_min = -1.0;
  bool feasible = false;
};
std::vector<BoundaryPoint> admission_boundary(std::span<const double> f_grid,
                                              const SolverOptions& opts = {},
                                              double resolution = 1e-2);

// Ten evenly spaced f values covering [6, 24].
std::vector<double> ex4_f_grid();

}  // namespace aoicap
