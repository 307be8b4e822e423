#pragma once

#include <functional>
#include <span>
#include <vector>

#include "aoicap/core.hpp"
#include "aoicap/region.hpp"

namespace aoicap {

struct SolverOptions {
  double eps = 1e-3;        // inner-bound strictness for the mu box
  double kkt_tol = 1e-8;    // projected-gradient-mapping residual target
  int max_iters = 100000;
  int n_starts = 20;        // multi-start count
  uint64_t seed = 20240901; // multi-start randomization
};

struct SolverResult {
  SecondOrderPoint point;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;        // iterations of the winning start
  double kkt_residual = 0.0;
  // True when the strict interior is empty (M = N) and the forced iid point
  // mu_i = p_i, sigma2_i = p_i(1-p_i) is returned instead.
  bool boundary = false;
};

// Euclidean projection, in y_i = mu_i/p_i coordinates, onto
// { sum mu_i/p_i = M,  max(lower_i, eps*p_i) <= mu_i <= (1-eps)*p_i }.
// Throws InfeasibleProblem when that set is empty.
std::vector<double> project_mu(std::span<const double> mu_raw, const NetworkConfig& cfg,
                               std::span<const double> lower, double eps);

// Soft-constraint violation penalty: convex, nondecreasing on x > 0, zero on
// x <= 0. Default is x^2 on x > 0.
struct PenaltySpec {
  std::function<double(double)> value = [](double x) { return x > 0.0 ? x * x : 0.0; };
  std::function<double(double)> deriv = [](double x) { return x > 0.0 ? 2.0 * x : 0.0; };
};

// Objective evaluators (exposed for the finite-difference gradient tests).
// Gradients are with respect to mu, unconstrained.

// Total approximate AoI after the exact inner minimization over sigma:
// 0.5*S^2(mu)/A(mu) + sum_i 1/(2 mu_i) + N/2, with S^2 = system_variance and
// A = sum_j mu_j^2/p_j^2.
double min_aoi_hard_objective(const NetworkConfig& cfg, std::span<const double> mu,
                              std::vector<double>* grad = nullptr);

double cost_soft_objective(const NetworkConfig& cfg, std::span<const double> q,
                           const PenaltySpec& penalty, std::span<const double> mu,
                           std::vector<double>* grad = nullptr);

// Proportional-fairness utility in the joint (mu, beta) parametrization
// sigma_i = p_i * beta_i * S(mu), beta on the unit simplex.
double prop_fair_objective(const NetworkConfig& cfg, std::span<const double> mu,
                           std::span<const double> beta, std::vector<double>* grad_mu = nullptr,
                           std::vector<double>* grad_beta = nullptr);

// Admission surplus: sum_i sqrt(max(cap_i,0))/p_i - S(mu) with
// cap_i = mu_i^2 (2 e_i - 1) - mu_i, nonnegative iff aoi_approx can meet e_i.
double admission_phi(const NetworkConfig& cfg, std::span<const double> e,
                     std::span<const double> mu, std::vector<double>* grad = nullptr);

// Example 1: minimize total AoI subject to per-device throughput floors q.
// Requires strict feasibility sum q_i/p_i < M.
SolverResult solve_min_aoi_hard(const NetworkConfig& cfg, std::span<const double> q,
                                const SolverOptions& opts = {});

// Example 2: minimize total penalty + total AoI, no hard floors.
SolverResult solve_cost_soft(const NetworkConfig& cfg, std::span<const double> q,
                             const SolverOptions& opts = {}, const PenaltySpec& penalty = {});

// Example 3: maximize sum_i (log mu_i - log aoi_i). `objective` is the
// maximal utility.
SolverResult solve_prop_fair(const NetworkConfig& cfg, const SolverOptions& opts = {});

// Example 4: is there an interior mu whose variance caps cover the system
// budget? Feasible iff max_mu admission_phi >= 0.
struct AdmissionResult {
  bool feasible = false;
  SecondOrderPoint witness;  // empty when infeasible
  double max_phi = 0.0;
  SolverResult diagnostics;
};
AdmissionResult check_admission(const NetworkConfig& cfg, std::span<const double> e,
                                const SolverOptions& opts = {});

}  // namespace aoicap
