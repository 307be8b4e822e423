// Test-only oracles: exhaustive grid searches over the strict-interior
// feasible set and quadrature for the inverse-Gaussian CDF. Everything here
// recomputes objectives from first principles (inline formulas, no solver
// code) so the main implementation is checked against an independent path.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "aoicap/core.hpp"

namespace aoicap::oracle {

inline double aoi_formula(double mu, double sigma2) {
  return 0.5 * (sigma2 / (mu * mu) + 1.0 / mu) + 0.5;
}

inline double sys_var(const NetworkConfig& cfg, const std::vector<double>& mu) {
  double s2 = 0.0;
  for (size_t i = 0; i < mu.size(); ++i) {
    const double p = cfg.success_probs[i];
    s2 += mu[i] / p * (1.0 / p - 1.0);
  }
  return s2;
}

// Lagrange inner allocation for objectives quadratic in sigma_i/mu_i:
// y_i = sqrt(sigma2_i)/p_i proportional to mu_i^2/p_i^2, summing to S.
inline std::vector<double> lagrange_sigma2(const NetworkConfig& cfg,
                                           const std::vector<double>& mu) {
  const size_t n = mu.size();
  const double s = std::sqrt(sys_var(cfg, mu));
  double denom = 0.0;
  std::vector<double> a(n);
  for (size_t i = 0; i < n; ++i) {
    const double p = cfg.success_probs[i];
    a[i] = mu[i] * mu[i] / (p * p);
    denom += a[i];
  }
  std::vector<double> sigma2(n);
  for (size_t i = 0; i < n; ++i) {
    const double y = s * a[i] / denom;
    sigma2[i] = (cfg.success_probs[i] * y) * (cfg.success_probs[i] * y);
  }
  return sigma2;
}

// Enumerates grid points of { y : sum y = M, lo_i <= y_i <= hi_i } for
// N in {1, 2, 3}: the first N-1 coordinates walk the grid, the last is
// forced by the budget.
inline void for_each_feasible_y(const NetworkConfig& cfg, const std::vector<double>& lo,
                                const std::vector<double>& hi, double step,
                                const std::function<void(const std::vector<double>&)>& fn) {
  const int n = cfg.n_devices;
  const double m = cfg.n_slots_per_round;
  const double slack = 1e-9;
  std::vector<double> y(n);
  auto grid_values = [&](int i) {
    std::vector<double> vals;
    for (double v = lo[i]; v < hi[i] + step * 0.5; v += step) vals.push_back(std::min(v, hi[i]));
    if (vals.empty() || vals.back() < hi[i] - slack) vals.push_back(hi[i]);
    return vals;
  };
  if (n == 1) {
    y[0] = m;
    if (y[0] >= lo[0] - slack && y[0] <= hi[0] + slack) fn(y);
    return;
  }
  if (n == 2) {
    for (double v0 : grid_values(0)) {
      y[0] = v0;
      y[1] = m - v0;
      if (y[1] >= lo[1] - slack && y[1] <= hi[1] + slack) fn(y);
    }
    return;
  }
  if (n == 3) {
    for (double v0 : grid_values(0)) {
      for (double v1 : grid_values(1)) {
        y[0] = v0;
        y[1] = v1;
        y[2] = m - v0 - v1;
        if (y[2] >= lo[2] - slack && y[2] <= hi[2] + slack) fn(y);
      }
    }
    return;
  }
  throw std::invalid_argument("grid oracle supports N <= 3");
}

inline std::vector<double> interior_lo(const NetworkConfig& cfg, const std::vector<double>& q,
                                       double eps) {
  std::vector<double> lo(cfg.n_devices, eps);
  for (int i = 0; i < cfg.n_devices; ++i) {
    if (!q.empty()) lo[i] = std::max(eps, q[i] / cfg.success_probs[i]);
  }
  return lo;
}

struct GridResult {
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> mu;
  bool found = false;
};

// Example 1: min total AoI with floors q, Lagrange inner sigma allocation.
inline GridResult grid_min_aoi_hard(const NetworkConfig& cfg, const std::vector<double>& q,
                                    double step, double eps) {
  GridResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const std::vector<double> lo = interior_lo(cfg, q, eps);
  const std::vector<double> hi(cfg.n_devices, 1.0 - eps);
  for_each_feasible_y(cfg, lo, hi, step, [&](const std::vector<double>& y) {
    std::vector<double> mu(y.size());
    for (size_t i = 0; i < y.size(); ++i) mu[i] = cfg.success_probs[i] * y[i];
    const std::vector<double> sigma2 = lagrange_sigma2(cfg, mu);
    double total = 0.0;
    for (size_t i = 0; i < mu.size(); ++i) total += aoi_formula(mu[i], sigma2[i]);
    if (total < best.objective) {
      best.objective = total;
      best.mu = mu;
      best.found = true;
    }
  });
  return best;
}

// Example 2: penalty (x+)^2 plus total AoI, no floors.
inline GridResult grid_cost_soft(const NetworkConfig& cfg, const std::vector<double>& q,
                                 double step, double eps) {
  GridResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const std::vector<double> lo = interior_lo(cfg, {}, eps);
  const std::vector<double> hi(cfg.n_devices, 1.0 - eps);
  for_each_feasible_y(cfg, lo, hi, step, [&](const std::vector<double>& y) {
    std::vector<double> mu(y.size());
    for (size_t i = 0; i < y.size(); ++i) mu[i] = cfg.success_probs[i] * y[i];
    const std::vector<double> sigma2 = lagrange_sigma2(cfg, mu);
    double total = 0.0;
    for (size_t i = 0; i < mu.size(); ++i) {
      const double v = q[i] - mu[i];
      total += (v > 0.0 ? v * v : 0.0) + aoi_formula(mu[i], sigma2[i]);
    }
    if (total < best.objective) {
      best.objective = total;
      best.mu = mu;
      best.found = true;
    }
  });
  return best;
}

// Example 3 utility at a fully specified (mu, beta) point.
inline double prop_fair_value(const NetworkConfig& cfg, const std::vector<double>& mu,
                              const std::vector<double>& beta) {
  const double s2 = sys_var(cfg, mu);
  double u = 0.0;
  for (size_t i = 0; i < mu.size(); ++i) {
    const double sigma = cfg.success_probs[i] * beta[i] * std::sqrt(s2);
    u += std::log(mu[i]) - std::log(aoi_formula(mu[i], sigma * sigma));
  }
  return u;
}

// Example 3 by joint exhaustive grid. For N = 2 the beta simplex is a
// segment; when the system variance vanishes (all p = 1) beta is immaterial
// and only mu is gridded, which also covers N = 3.
inline GridResult grid_prop_fair(const NetworkConfig& cfg, double step, double eps) {
  GridResult best;
  best.objective = -std::numeric_limits<double>::infinity();
  const std::vector<double> lo = interior_lo(cfg, {}, eps);
  const std::vector<double> hi(cfg.n_devices, 1.0 - eps);
  const int n = cfg.n_devices;
  bool zero_variance = true;
  for (double p : cfg.success_probs) zero_variance = zero_variance && p == 1.0;
  if (!zero_variance && n != 2) {
    throw std::invalid_argument("joint prop-fair grid oracle supports N = 2 (or all p = 1)");
  }
  for_each_feasible_y(cfg, lo, hi, step, [&](const std::vector<double>& y) {
    std::vector<double> mu(y.size());
    for (size_t i = 0; i < y.size(); ++i) mu[i] = cfg.success_probs[i] * y[i];
    if (zero_variance) {
      const double u = prop_fair_value(cfg, mu, std::vector<double>(n, 1.0 / n));
      if (u > best.objective) {
        best.objective = u;
        best.mu = mu;
        best.found = true;
      }
      return;
    }
    for (double b = 0.0; b <= 1.0 + 1e-12; b += step) {
      const double u = prop_fair_value(cfg, mu, {b, 1.0 - b});
      if (u > best.objective) {
        best.objective = u;
        best.mu = mu;
        best.found = true;
      }
    }
  });
  return best;
}

// Example 4 surplus at mu, from scratch.
inline double phi_value(const NetworkConfig& cfg, const std::vector<double>& e,
                        const std::vector<double>& mu) {
  double total = -std::sqrt(sys_var(cfg, mu));
  for (size_t i = 0; i < mu.size(); ++i) {
    const double cap = mu[i] * mu[i] * (2.0 * e[i] - 1.0) - mu[i];
    total += std::sqrt(std::max(cap, 0.0)) / cfg.success_probs[i];
  }
  return total;
}

inline GridResult grid_admission(const NetworkConfig& cfg, const std::vector<double>& e,
                                 double step, double eps) {
  GridResult best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::vector<double> lo(cfg.n_devices);
  for (int i = 0; i < cfg.n_devices; ++i) {
    lo[i] = std::max(eps, 1.0 / ((2.0 * e[i] - 1.0) * cfg.success_probs[i]));
  }
  const std::vector<double> hi(cfg.n_devices, 1.0 - eps);
  for (int i = 0; i < cfg.n_devices; ++i) {
    if (lo[i] > hi[i]) return best;  // empty interior: infeasible
  }
  for_each_feasible_y(cfg, lo, hi, step, [&](const std::vector<double>& y) {
    std::vector<double> mu(y.size());
    for (size_t i = 0; i < y.size(); ++i) mu[i] = cfg.success_probs[i] * y[i];
    const double phi = phi_value(cfg, e, mu);
    if (phi > best.objective) {
      best.objective = phi;
      best.mu = mu;
      best.found = true;
    }
  });
  return best;
}

// Inverse-Gaussian density, integrated by adaptive Simpson for a CDF oracle.
inline double ig_density(double x, double mean, double shape) {
  if (x <= 0.0) return 0.0;
  const double z = x - mean;
  return std::sqrt(shape / (2.0 * M_PI * x * x * x)) *
         std::exp(-shape * z * z / (2.0 * mean * mean * x));
}

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, fm, flm, tol * 0.5, depth - 1) +
         simpson(f, m, b, fm, fb, frm, tol * 0.5, depth - 1);
}

inline double ig_cdf_quadrature(double x, double mean, double shape) {
  if (x <= 0.0) return 0.0;
  auto f = [&](double t) { return ig_density(t, mean, shape); };
  const double a = 1e-12;
  return simpson(f, a, x, f(a), f(x), f(0.5 * (a + x)), 1e-11, 40);
}

}  // namespace aoicap::oracle
