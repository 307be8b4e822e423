#pragma once

#include <span>
#include <string>
#include <vector>

#include "aoicap/core.hpp"

namespace aoicap {

// Targets with sigma2 below this are clamped when a variance appears in a
// denominator (deficits); Theorem-2 interiors exclude true zeros, so the
// clamp only matters in boundary experiments.
inline constexpr double kSigmaFloor = 1e-12;

// Second-order AoI approximation: 0.5*(sigma2/mu^2 + 1/mu) + 0.5.
// Exact for an iid Bernoulli(p) delivery process (mu=p, sigma2=p(1-p) -> 1/p).
double aoi_approx(double mu, double sigma2);

// Long-term variance of the projected process: sum_i (mu_i/p_i)(1/p_i - 1).
double system_variance(std::span<const double> mu, std::span<const double> p);

struct ConstraintViolation {
  std::string constraint;  // e.g. "aoi_ceiling[3]"
  double slack;            // negative when violated
};

struct RegionCheckReport {
  bool feasible = false;
  std::vector<ConstraintViolation> violated;
  double slack_variance = 0.0;  // sum_i sqrt(sigma2_i/p_i^2) - sqrt(sigma^2)
  double slack_mean = 0.0;      // M - sum_i mu_i/p_i
};

// Equality tolerances: tight defaults for analytic candidates; use
// empirical() when checking points estimated from simulation.
struct RegionTolerances {
  double mean_budget_abs = 1e-9;
  double variance_budget_abs = 1e-9;
  static RegionTolerances empirical() { return {1e-2, 1e-2}; }
};

// Necessary conditions (outer bound): floors, ceilings, schedule budget
// equality, 0 <= mu_i/p_i <= 1, and variance budget as an inequality.
// delta, when nonempty, is the per-device AoI approximation margin applied
// on the optimistic side (ceiling satisfied if aoi - delta_i <= h_i).
RegionCheckReport check_outer(const TargetPairs& pairs, const SecondOrderPoint& candidate,
                              const NetworkConfig& cfg, std::span<const double> delta = {},
                              const RegionTolerances& tol = {});

// Sufficient conditions (inner bound): strict interior eps <= mu_i/p_i <=
// 1-eps and the variance budget as an equality; delta applied on the
// pessimistic side (aoi + delta_i <= h_i).
RegionCheckReport check_inner(const TargetPairs& pairs, const SecondOrderPoint& candidate,
                              const NetworkConfig& cfg, double eps = 1e-3,
                              std::span<const double> delta = {},
                              const RegionTolerances& tol = {});

// Closed-form minimizer of sum_i w_i * sigma2_i / mu_i^2 subject to the
// variance-budget equality sum_i sqrt(sigma2_i)/p_i = sqrt(sigma^2(mu)).
// With y_i = sqrt(sigma2_i)/p_i the optimum is y_i proportional to
// mu_i^2/(w_i p_i^2). Requires mu_i > 0 and w_i > 0.
std::vector<double> allocate_variances(std::span<const double> mu, std::span<const double> p,
                                       std::span<const double> w);

}  // namespace aoicap
