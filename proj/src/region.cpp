#include "aoicap/region.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace aoicap {

namespace {

constexpr double kHuge = 1e300;

std::string indexed(const char* name, int i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s[%d]", name, i);
  return buf;
}

void add_if_violated(RegionCheckReport& rep, std::string name, double slack) {
  if (slack < 0.0) rep.violated.push_back({std::move(name), slack});
}

// Shared constraint evaluation; `inner` toggles the strict-interior box and
// the equality form of the variance budget.
RegionCheckReport check_common(const TargetPairs& pairs, const SecondOrderPoint& cand,
                               const NetworkConfig& cfg, std::span<const double> delta,
                               const RegionTolerances& tol, bool inner, double eps) {
  validate_config(cfg);
  validate_point(cand, cfg.n_devices);
  // Dimensions only: a ceiling below 1 is a legitimate query that the AoI
  // constraint reports as infeasible (AoI >= 1 always).
  if (static_cast<int>(pairs.m.size()) != cfg.n_devices ||
      static_cast<int>(pairs.h.size()) != cfg.n_devices) {
    throw std::invalid_argument("target pairs have wrong dimension");
  }
  if (!delta.empty() && static_cast<int>(delta.size()) != cfg.n_devices) {
    throw std::invalid_argument("delta margin vector has wrong dimension");
  }

  const int n = cfg.n_devices;
  RegionCheckReport rep;

  double budget = 0.0;     // sum mu_i / p_i
  double y_total = 0.0;    // sum sqrt(sigma2_i)/p_i
  for (int i = 0; i < n; ++i) {
    const double p = cfg.success_probs[i];
    const double mu = cand.mu[i];
    const double ratio = mu / p;
    budget += ratio;
    y_total += std::sqrt(cand.sigma2[i]) / p;

    add_if_violated(rep, indexed("throughput_floor", i), mu - pairs.m[i]);

    const double d = delta.empty() ? 0.0 : delta[i];
    double aoi = mu > 0.0 ? aoi_approx(mu, cand.sigma2[i]) : kHuge;
    aoi += inner ? d : -d;
    add_if_violated(rep, indexed("aoi_ceiling", i), pairs.h[i] - aoi);

    if (inner) {
      add_if_violated(rep, indexed("schedule_fraction", i),
                      std::min(ratio - eps, (1.0 - eps) - ratio));
    } else {
      add_if_violated(rep, indexed("schedule_fraction", i), std::min(ratio, 1.0 - ratio));
    }
  }

  const double sys = system_variance(cand.mu, cfg.success_probs);
  rep.slack_mean = static_cast<double>(cfg.n_slots_per_round) - budget;
  rep.slack_variance = y_total - std::sqrt(sys);

  add_if_violated(rep, "mean_budget", tol.mean_budget_abs - std::abs(rep.slack_mean));
  if (inner) {
    add_if_violated(rep, "variance_budget", tol.variance_budget_abs - std::abs(rep.slack_variance));
  } else {
    add_if_violated(rep, "variance_budget", rep.slack_variance + tol.variance_budget_abs);
  }

  rep.feasible = rep.violated.empty();
  return rep;
}

}  // namespace

double aoi_approx(double mu, double sigma2) {
  if (!(mu > 0.0)) throw std::invalid_argument("aoi_approx requires mu > 0");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("aoi_approx requires sigma2 >= 0");
  return 0.5 * (sigma2 / (mu * mu) + 1.0 / mu) + 0.5;
}

double system_variance(std::span<const double> mu, std::span<const double> p) {
  if (mu.size() != p.size()) throw std::invalid_argument("mu/p dimension mismatch");
  double total = 0.0;
  for (size_t i = 0; i < mu.size(); ++i) {
    if (!(p[i] > 0.0) || p[i] > 1.0) throw std::invalid_argument("p out of (0,1]");
    if (!(mu[i] >= 0.0)) throw std::invalid_argument("mu must be >= 0");
    total += mu[i] / p[i] * (1.0 / p[i] - 1.0);
  }
  return total;
}

RegionCheckReport check_outer(const TargetPairs& pairs, const SecondOrderPoint& candidate,
                              const NetworkConfig& cfg, std::span<const double> delta,
                              const RegionTolerances& tol) {
  return check_common(pairs, candidate, cfg, delta, tol, /*inner=*/false, 0.0);
}

RegionCheckReport check_inner(const TargetPairs& pairs, const SecondOrderPoint& candidate,
                              const NetworkConfig& cfg, double eps, std::span<const double> delta,
                              const RegionTolerances& tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("inner-bound strictness eps must be > 0");
  return check_common(pairs, candidate, cfg, delta, tol, /*inner=*/true, eps);
}

std::vector<double> allocate_variances(std::span<const double> mu, std::span<const double> p,
                                       std::span<const double> w) {
  if (mu.size() != p.size() || mu.size() != w.size()) {
    throw std::invalid_argument("allocate_variances: dimension mismatch");
  }
  const size_t n = mu.size();
  double denom = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!(mu[i] > 0.0)) throw std::invalid_argument("allocate_variances requires mu > 0");
    if (!(w[i] > 0.0)) throw std::invalid_argument("allocate_variances requires w > 0");
    denom += mu[i] * mu[i] / (w[i] * p[i] * p[i]);
  }
  const double total = std::sqrt(system_variance(mu, p));
  std::vector<double> sigma2(n);
  for (size_t i = 0; i < n; ++i) {
    const double y = total * (mu[i] * mu[i] / (w[i] * p[i] * p[i])) / denom;
    sigma2[i] = (p[i] * y) * (p[i] * y);
  }
  return sigma2;
}

}  // namespace aoicap
