#include "aoicap/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aoicap/rng.hpp"

namespace aoicap {

namespace {

constexpr double kFeasTol = 1e-12;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Euclidean projection onto { y : sum y = target, lo <= y <= hi }.
// Caller guarantees sum lo <= target <= sum hi.
std::vector<double> project_box_sum(std::span<const double> v, std::span<const double> lo,
                                    std::span<const double> hi, double target) {
  const size_t n = v.size();
  double nu_lo = std::numeric_limits<double>::infinity();
  double nu_hi = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    nu_lo = std::min(nu_lo, v[i] - hi[i]);
    nu_hi = std::max(nu_hi, v[i] - lo[i]);
  }
  auto total_at = [&](double nu) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += clamp(v[i] - nu, lo[i], hi[i]);
    return s;
  };
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (nu_lo + nu_hi);
    if (total_at(mid) >= target) {
      nu_lo = mid;
    } else {
      nu_hi = mid;
    }
  }
  const double nu = 0.5 * (nu_lo + nu_hi);
  std::vector<double> y(n);
  int free_count = 0;
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    y[i] = clamp(v[i] - nu, lo[i], hi[i]);
    sum += y[i];
    if (y[i] > lo[i] && y[i] < hi[i]) ++free_count;
  }
  if (free_count > 0) {
    const double shift = (target - sum) / free_count;
    for (size_t i = 0; i < n; ++i) {
      if (y[i] > lo[i] && y[i] < hi[i]) y[i] = clamp(y[i] + shift, lo[i], hi[i]);
    }
  }
  return y;
}

struct PgOutcome {
  std::vector<double> z;
  double f = 0.0;
  int iters = 0;
  double kkt = 0.0;
  bool converged = false;
};

// Spectral projected gradient (Barzilai-Borwein steps, nonmonotone Grippo
// line search). Minimizes f over the set given by `project`. `converged`
// means the scaled gradient-mapping residual reached kkt_tol, or descent is
// exhausted at double precision with the residual still below 1e-6.
PgOutcome projected_gradient(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& eval,
    const std::function<void(std::vector<double>&)>& project, std::vector<double> z0,
    const SolverOptions& opts) {
  project(z0);
  PgOutcome out;
  out.z = std::move(z0);
  std::vector<double> grad(out.z.size()), trial, grad_trial(out.z.size());
  out.f = eval(out.z, grad);
  double alpha = 1.0;

  constexpr int kHistory = 10;
  std::vector<double> recent(kHistory, out.f);

  std::vector<double> best_z = out.z;
  double best_f = out.f;

  auto residual_at = [&](const std::vector<double>& z, const std::vector<double>& g) {
    double gmax = 1.0;
    for (double gi : g) gmax = std::max(gmax, std::abs(gi));
    std::vector<double> step = z;
    for (size_t i = 0; i < step.size(); ++i) step[i] -= g[i] / gmax;
    project(step);
    double r = 0.0;
    for (size_t i = 0; i < step.size(); ++i) r = std::max(r, std::abs(step[i] - z[i]));
    return r;
  };

  bool stalled = false;
  for (out.iters = 0; out.iters < opts.max_iters; ++out.iters) {
    out.kkt = residual_at(out.z, grad);
    if (out.kkt < opts.kkt_tol) {
      out.converged = true;
      break;
    }
    const double f_ref = *std::max_element(recent.begin(), recent.end());
    bool accepted = false;
    while (alpha >= 1e-16) {
      trial = out.z;
      for (size_t i = 0; i < trial.size(); ++i) trial[i] -= alpha * grad[i];
      project(trial);
      double decr = 0.0;
      for (size_t i = 0; i < trial.size(); ++i) decr += grad[i] * (trial[i] - out.z[i]);
      const double f_trial = eval(trial, grad_trial);
      if (f_trial <= f_ref + 1e-4 * decr) {
        double dzdz = 0.0, dzdg = 0.0;
        for (size_t i = 0; i < trial.size(); ++i) {
          const double dz = trial[i] - out.z[i];
          dzdz += dz * dz;
          dzdg += dz * (grad_trial[i] - grad[i]);
        }
        alpha = dzdg > 0.0 ? std::clamp(dzdz / dzdg, 1e-12, 1e8) : std::min(alpha * 2.0, 1e6);
        out.z.swap(trial);
        out.f = f_trial;
        grad.swap(grad_trial);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    recent[out.iters % kHistory] = out.f;
    if (out.f < best_f) {
      best_f = out.f;
      best_z = out.z;
    }
  }

  if (!out.converged && out.f > best_f) {
    out.f = best_f;
    out.z = best_z;
    eval(out.z, grad);
    out.kkt = residual_at(out.z, grad);
    out.converged = out.kkt < opts.kkt_tol;
  }
  if (!out.converged && stalled && out.kkt < 1e-6) out.converged = true;
  return out;
}

struct StartMaker {
  std::function<std::vector<double>(int)> make;  // start j
};

PgOutcome multi_start(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& eval,
    const std::function<void(std::vector<double>&)>& project, const StartMaker& starts,
    const SolverOptions& opts) {
  PgOutcome best;
  bool have = false;
  for (int j = 0; j < std::max(opts.n_starts, 1); ++j) {
    PgOutcome got = projected_gradient(eval, project, starts.make(j), opts);
    if (!have || got.f < best.f) {
      best = std::move(got);
      have = true;
    }
  }
  return best;
}

std::vector<double> coeff_c(const NetworkConfig& cfg) {
  std::vector<double> c(cfg.n_devices);
  for (int i = 0; i < cfg.n_devices; ++i) {
    const double p = cfg.success_probs[i];
    c[i] = (1.0 - p) / (p * p);
  }
  return c;
}

void require_positive_mu(std::span<const double> mu) {
  for (double m : mu) {
    if (!(m > 0.0)) throw std::invalid_argument("objective requires mu > 0");
  }
}

// Forced point when the strict interior is empty (M = N): every device is
// scheduled every slot, so Z_i is iid Bernoulli(p_i).
SecondOrderPoint iid_point(const NetworkConfig& cfg) {
  SecondOrderPoint pt;
  pt.mu = cfg.success_probs;
  pt.sigma2.resize(cfg.n_devices);
  for (int i = 0; i < cfg.n_devices; ++i) {
    const double p = cfg.success_probs[i];
    pt.sigma2[i] = p * (1.0 - p);
  }
  return pt;
}

struct YBox {
  std::vector<double> lo, hi;
  double target = 0.0;
};

// Interior box in y = mu/p coordinates; throws InfeasibleProblem if empty.
YBox make_box(const NetworkConfig& cfg, std::span<const double> lower_mu, double eps) {
  const int n = cfg.n_devices;
  YBox box;
  box.lo.resize(n);
  box.hi.assign(n, 1.0 - eps);
  box.target = static_cast<double>(cfg.n_slots_per_round);
  double lo_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double floor_y = lower_mu.empty() ? 0.0 : lower_mu[i] / cfg.success_probs[i];
    box.lo[i] = std::max(floor_y, eps);
    if (box.lo[i] > box.hi[i] + kFeasTol) {
      throw InfeasibleProblem("throughput floor leaves no strict interior for a device");
    }
    lo_sum += box.lo[i];
  }
  if (lo_sum > box.target + kFeasTol) {
    throw InfeasibleProblem("sum of lower bounds exceeds the schedule budget M");
  }
  if (static_cast<double>(n) * (1.0 - eps) < box.target - kFeasTol) {
    throw InfeasibleProblem("schedule budget M leaves no strict interior");
  }
  return box;
}

StartMaker y_starts(const YBox& box, const SolverOptions& opts) {
  StartMaker s;
  s.make = [&box, opts](int j) {
    const size_t n = box.lo.size();
    std::vector<double> y(n);
    if (j == 0) {
      for (size_t i = 0; i < n; ++i) y[i] = box.target / static_cast<double>(n);
    } else {
      const CounterRng rng(opts.seed, static_cast<uint64_t>(j));
      for (size_t i = 0; i < n; ++i) {
        y[i] = box.lo[i] + rng.uniform(0, i) * (box.hi[i] - box.lo[i]);
      }
    }
    return y;
  };
  return s;
}

std::vector<double> mu_of_y(const NetworkConfig& cfg, const std::vector<double>& y) {
  std::vector<double> mu(y.size());
  for (size_t i = 0; i < y.size(); ++i) mu[i] = cfg.success_probs[i] * y[i];
  return mu;
}

SolverResult assemble(const PgOutcome& got, SecondOrderPoint point, double objective) {
  SolverResult res;
  res.point = std::move(point);
  res.objective = objective;
  res.converged = got.converged;
  res.iterations = got.iters;
  res.kkt_residual = got.kkt;
  return res;
}

}  // namespace

std::vector<double> project_mu(std::span<const double> mu_raw, const NetworkConfig& cfg,
                               std::span<const double> lower, double eps) {
  validate_config(cfg);
  const int n = cfg.n_devices;
  if (static_cast<int>(mu_raw.size()) != n) throw std::invalid_argument("mu_raw dimension");
  if (!lower.empty() && static_cast<int>(lower.size()) != n) {
    throw std::invalid_argument("lower dimension");
  }
  if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");

  YBox box;
  box.lo.resize(n);
  box.hi.assign(n, 1.0 - eps);
  box.target = static_cast<double>(cfg.n_slots_per_round);
  double lo_sum = 0.0, hi_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    box.lo[i] = std::max(lower.empty() ? 0.0 : lower[i] / cfg.success_probs[i], eps);
    if (box.lo[i] > box.hi[i] + kFeasTol) throw InfeasibleProblem("empty feasible set (box)");
    lo_sum += box.lo[i];
    hi_sum += box.hi[i];
  }
  if (lo_sum > box.target + kFeasTol || hi_sum < box.target - kFeasTol) {
    throw InfeasibleProblem("empty feasible set (budget)");
  }

  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = mu_raw[i] / cfg.success_probs[i];
  y = project_box_sum(y, box.lo, box.hi, box.target);
  return mu_of_y(cfg, y);
}

double min_aoi_hard_objective(const NetworkConfig& cfg, std::span<const double> mu,
                              std::vector<double>* grad) {
  require_positive_mu(mu);
  const int n = cfg.n_devices;
  const std::vector<double> c = coeff_c(cfg);
  double s2 = 0.0, a = 0.0;
  for (int i = 0; i < n; ++i) {
    s2 += c[i] * mu[i];
    const double r = mu[i] / cfg.success_probs[i];
    a += r * r;
  }
  double f = 0.5 * s2 / a + 0.5 * n;
  for (int i = 0; i < n; ++i) f += 0.5 / mu[i];
  if (grad) {
    grad->resize(n);
    for (int i = 0; i < n; ++i) {
      const double p2 = cfg.success_probs[i] * cfg.success_probs[i];
      (*grad)[i] = 0.5 * (c[i] * a - s2 * 2.0 * mu[i] / p2) / (a * a) - 0.5 / (mu[i] * mu[i]);
    }
  }
  return f;
}

double cost_soft_objective(const NetworkConfig& cfg, std::span<const double> q,
                           const PenaltySpec& penalty, std::span<const double> mu,
                           std::vector<double>* grad) {
  double f = min_aoi_hard_objective(cfg, mu, grad);
  for (int i = 0; i < cfg.n_devices; ++i) {
    f += penalty.value(q[i] - mu[i]);
    if (grad) (*grad)[i] -= penalty.deriv(q[i] - mu[i]);
  }
  return f;
}

double prop_fair_objective(const NetworkConfig& cfg, std::span<const double> mu,
                           std::span<const double> beta, std::vector<double>* grad_mu,
                           std::vector<double>* grad_beta) {
  require_positive_mu(mu);
  const int n = cfg.n_devices;
  const std::vector<double> c = coeff_c(cfg);
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) s2 += c[i] * mu[i];

  std::vector<double> k(n), aoi(n);
  double u = 0.0;
  double coupling = 0.0;  // sum_i k_i / (aoi_i * mu_i^2), multiplies c_j in grad_mu
  for (int i = 0; i < n; ++i) {
    const double p = cfg.success_probs[i];
    k[i] = 0.5 * p * p * beta[i] * beta[i];
    aoi[i] = k[i] * s2 / (mu[i] * mu[i]) + 0.5 / mu[i] + 0.5;
    u += std::log(mu[i]) - std::log(aoi[i]);
    coupling += k[i] / (aoi[i] * mu[i] * mu[i]);
  }
  if (grad_mu) {
    grad_mu->resize(n);
    for (int j = 0; j < n; ++j) {
      const double own = (-2.0 * k[j] * s2 / (mu[j] * mu[j] * mu[j]) - 0.5 / (mu[j] * mu[j]));
      (*grad_mu)[j] = 1.0 / mu[j] - coupling * c[j] - own / aoi[j];
    }
  }
  if (grad_beta) {
    grad_beta->resize(n);
    for (int i = 0; i < n; ++i) {
      const double p = cfg.success_probs[i];
      (*grad_beta)[i] = -(p * p * beta[i] * s2 / (mu[i] * mu[i])) / aoi[i];
    }
  }
  return u;
}

double admission_phi(const NetworkConfig& cfg, std::span<const double> e,
                     std::span<const double> mu, std::vector<double>* grad) {
  require_positive_mu(mu);
  const int n = cfg.n_devices;
  const std::vector<double> c = coeff_c(cfg);
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) s2 += c[i] * mu[i];
  const double s = std::sqrt(std::max(s2, 0.0));

  double phi = -s;
  if (grad) grad->assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double slope2e = 2.0 * e[i] - 1.0;
    const double cap = mu[i] * mu[i] * slope2e - mu[i];
    phi += std::sqrt(std::max(cap, 0.0)) / cfg.success_probs[i];
    if (grad) {
      const double root = std::sqrt(std::max(cap, 1e-12));
      (*grad)[i] = (2.0 * mu[i] * slope2e - 1.0) / (2.0 * root * cfg.success_probs[i]) -
                   c[i] / (2.0 * std::max(s, 1e-9));
    }
  }
  return phi;
}

SolverResult solve_min_aoi_hard(const NetworkConfig& cfg, std::span<const double> q,
                                const SolverOptions& opts) {
  validate_config(cfg);
  const int n = cfg.n_devices;
  if (static_cast<int>(q.size()) != n) throw std::invalid_argument("q dimension");
  double budget = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(q[i] >= 0.0)) throw std::invalid_argument("q must be >= 0");
    budget += q[i] / cfg.success_probs[i];
  }
  const double m = cfg.n_slots_per_round;
  if (budget >= m) throw InfeasibleProblem("sum q_i/p_i must be < M");

  if (cfg.n_slots_per_round == cfg.n_devices) {
    SecondOrderPoint pt = iid_point(cfg);
    for (int i = 0; i < n; ++i) {
      if (q[i] > pt.mu[i] + kFeasTol) throw InfeasibleProblem("floor above p_i at M = N");
    }
    double obj = 0.0;
    for (int i = 0; i < n; ++i) obj += aoi_approx(pt.mu[i], pt.sigma2[i]);
    SolverResult res;
    res.point = std::move(pt);
    res.objective = obj;
    res.converged = true;
    res.boundary = true;
    return res;
  }

  const YBox box = make_box(cfg, q, opts.eps);
  auto eval = [&](const std::vector<double>& y, std::vector<double>& grad) {
    const std::vector<double> mu = mu_of_y(cfg, y);
    std::vector<double> gmu;
    const double f = min_aoi_hard_objective(cfg, mu, &gmu);
    grad.resize(y.size());
    for (size_t i = 0; i < y.size(); ++i) grad[i] = cfg.success_probs[i] * gmu[i];
    return f;
  };
  auto project = [&](std::vector<double>& y) {
    y = project_box_sum(y, box.lo, box.hi, box.target);
  };
  const PgOutcome got = multi_start(eval, project, y_starts(box, opts), opts);

  SecondOrderPoint pt;
  pt.mu = mu_of_y(cfg, got.z);
  const std::vector<double> ones(n, 1.0);
  pt.sigma2 = allocate_variances(pt.mu, cfg.success_probs, ones);
  const double obj = min_aoi_hard_objective(cfg, pt.mu, nullptr);
  return assemble(got, std::move(pt), obj);
}

SolverResult solve_cost_soft(const NetworkConfig& cfg, std::span<const double> q,
                             const SolverOptions& opts, const PenaltySpec& penalty) {
  validate_config(cfg);
  const int n = cfg.n_devices;
  if (static_cast<int>(q.size()) != n) throw std::invalid_argument("q dimension");

  if (cfg.n_slots_per_round == cfg.n_devices) {
    SecondOrderPoint pt = iid_point(cfg);
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
      obj += penalty.value(q[i] - pt.mu[i]) + aoi_approx(pt.mu[i], pt.sigma2[i]);
    }
    SolverResult res;
    res.point = std::move(pt);
    res.objective = obj;
    res.converged = true;
    res.boundary = true;
    return res;
  }

  const YBox box = make_box(cfg, {}, opts.eps);
  auto eval = [&](const std::vector<double>& y, std::vector<double>& grad) {
    const std::vector<double> mu = mu_of_y(cfg, y);
    std::vector<double> gmu;
    const double f = cost_soft_objective(cfg, q, penalty, mu, &gmu);
    grad.resize(y.size());
    for (size_t i = 0; i < y.size(); ++i) grad[i] = cfg.success_probs[i] * gmu[i];
    return f;
  };
  auto project = [&](std::vector<double>& y) {
    y = project_box_sum(y, box.lo, box.hi, box.target);
  };
  const PgOutcome got = multi_start(eval, project, y_starts(box, opts), opts);

  SecondOrderPoint pt;
  pt.mu = mu_of_y(cfg, got.z);
  const std::vector<double> ones(n, 1.0);
  pt.sigma2 = allocate_variances(pt.mu, cfg.success_probs, ones);
  const double obj = cost_soft_objective(cfg, q, penalty, pt.mu, nullptr);
  return assemble(got, std::move(pt), obj);
}

SolverResult solve_prop_fair(const NetworkConfig& cfg, const SolverOptions& opts) {
  validate_config(cfg);
  const int n = cfg.n_devices;

  if (cfg.n_slots_per_round == cfg.n_devices) {
    SecondOrderPoint pt = iid_point(cfg);
    double u = 0.0;
    for (int i = 0; i < n; ++i) {
      u += std::log(pt.mu[i]) - std::log(aoi_approx(pt.mu[i], pt.sigma2[i]));
    }
    SolverResult res;
    res.point = std::move(pt);
    res.objective = u;
    res.converged = true;
    res.boundary = true;
    return res;
  }

  const YBox box = make_box(cfg, {}, opts.eps);
  const std::vector<double> beta_lo(n, 0.0), beta_hi(n, 1.0);

  auto eval = [&](const std::vector<double>& z, std::vector<double>& grad) {
    const std::vector<double> y(z.begin(), z.begin() + n);
    const std::vector<double> beta(z.begin() + n, z.end());
    const std::vector<double> mu = mu_of_y(cfg, y);
    std::vector<double> gmu, gbeta;
    const double u = prop_fair_objective(cfg, mu, beta, &gmu, &gbeta);
    grad.resize(2 * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      grad[i] = -cfg.success_probs[i] * gmu[i];
      grad[n + i] = -gbeta[i];
    }
    return -u;
  };
  auto project = [&](std::vector<double>& z) {
    std::vector<double> y(z.begin(), z.begin() + n);
    std::vector<double> beta(z.begin() + n, z.end());
    y = project_box_sum(y, box.lo, box.hi, box.target);
    beta = project_box_sum(beta, beta_lo, beta_hi, 1.0);
    std::copy(y.begin(), y.end(), z.begin());
    std::copy(beta.begin(), beta.end(), z.begin() + n);
  };
  const StartMaker ys = y_starts(box, opts);
  StartMaker starts;
  starts.make = [&, n](int j) {
    std::vector<double> z = ys.make(j);
    z.resize(2 * static_cast<size_t>(n));
    if (j == 0) {
      for (int i = 0; i < n; ++i) z[n + i] = 1.0 / n;
    } else {
      const CounterRng rng(opts.seed ^ 0x5851f42d4c957f2dULL, static_cast<uint64_t>(j));
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        z[n + i] = -std::log(1.0 - rng.uniform(1, static_cast<uint64_t>(i)));
        total += z[n + i];
      }
      for (int i = 0; i < n; ++i) z[n + i] /= total;
    }
    return z;
  };
  const PgOutcome got = multi_start(eval, project, starts, opts);

  const std::vector<double> y(got.z.begin(), got.z.begin() + n);
  const std::vector<double> beta(got.z.begin() + n, got.z.end());
  SecondOrderPoint pt;
  pt.mu = mu_of_y(cfg, y);
  const double s = std::sqrt(system_variance(pt.mu, cfg.success_probs));
  pt.sigma2.resize(n);
  for (int i = 0; i < n; ++i) {
    const double sigma = cfg.success_probs[i] * beta[i] * s;
    pt.sigma2[i] = sigma * sigma;
  }
  const double u = prop_fair_objective(cfg, pt.mu, beta, nullptr, nullptr);
  return assemble(got, std::move(pt), u);
}

AdmissionResult check_admission(const NetworkConfig& cfg, std::span<const double> e,
                                const SolverOptions& opts) {
  validate_config(cfg);
  const int n = cfg.n_devices;
  if (static_cast<int>(e.size()) != n) throw std::invalid_argument("e dimension");

  AdmissionResult res;
  res.max_phi = -1e300;
  for (int i = 0; i < n; ++i) {
    if (!(e[i] > 0.5)) return res;  // aoi_approx >= 1 > e_i: no cap can be met
  }

  if (cfg.n_slots_per_round == cfg.n_devices) {
    // Only one achievable point: iid Bernoulli with AoI exactly 1/p_i.
    SecondOrderPoint pt = iid_point(cfg);
    res.feasible = true;
    for (int i = 0; i < n; ++i) {
      if (1.0 / cfg.success_probs[i] > e[i] + 1e-9) res.feasible = false;
    }
    res.max_phi = admission_phi(cfg, e, pt.mu, nullptr);
    if (res.feasible) res.witness = std::move(pt);
    res.diagnostics.converged = true;
    res.diagnostics.boundary = true;
    return res;
  }

  // Lower bounds keeping every cap nonnegative: mu_i >= 1/(2 e_i - 1).
  std::vector<double> lower(n);
  for (int i = 0; i < n; ++i) lower[i] = 1.0 / (2.0 * e[i] - 1.0);
  YBox box;
  try {
    box = make_box(cfg, lower, opts.eps);
  } catch (const InfeasibleProblem&) {
    return res;  // caps cannot even be nonnegative within the budget
  }

  auto eval = [&](const std::vector<double>& y, std::vector<double>& grad) {
    const std::vector<double> mu = mu_of_y(cfg, y);
    std::vector<double> gmu;
    const double phi = admission_phi(cfg, e, mu, &gmu);
    grad.resize(y.size());
    for (size_t i = 0; i < y.size(); ++i) grad[i] = -cfg.success_probs[i] * gmu[i];
    return -phi;
  };
  auto project = [&](std::vector<double>& y) {
    y = project_box_sum(y, box.lo, box.hi, box.target);
  };
  const PgOutcome got = multi_start(eval, project, y_starts(box, opts), opts);

  const std::vector<double> mu = mu_of_y(cfg, got.z);
  res.max_phi = admission_phi(cfg, e, mu, nullptr);
  res.feasible = res.max_phi >= -1e-10;
  res.diagnostics = assemble(got, {}, res.max_phi);
  if (res.feasible) {
    // Scale cap roots down to meet the variance budget with equality.
    const double s = std::sqrt(system_variance(mu, cfg.success_probs));
    std::vector<double> y_cap(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double cap = mu[i] * mu[i] * (2.0 * e[i] - 1.0) - mu[i];
      y_cap[i] = std::sqrt(std::max(cap, 0.0)) / cfg.success_probs[i];
      total += y_cap[i];
    }
    const double scale = total > 0.0 ? s / total : 0.0;
    SecondOrderPoint pt;
    pt.mu = mu;
    pt.sigma2.resize(n);
    for (int i = 0; i < n; ++i) {
      const double sigma = cfg.success_probs[i] * y_cap[i] * scale;
      pt.sigma2[i] = sigma * sigma;
    }
    res.witness = pt;
    res.diagnostics.point = std::move(pt);
  }
  return res;
}

}  // namespace aoicap
