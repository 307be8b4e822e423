#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "aoicap/region.hpp"
#include "aoicap/rng.hpp"

using namespace aoicap;

TEST_CASE("aoi_approx hand values") {
  CHECK(aoi_approx(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(aoi_approx(0.5, 0.0) == doctest::Approx(1.5));
  // always-scheduled Bernoulli(0.25): mu = p, sigma2 = p(1-p), AoI = 1/p
  CHECK(aoi_approx(0.25, 0.1875) == doctest::Approx(4.0));
  CHECK_THROWS_AS(aoi_approx(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(aoi_approx(-0.5, 0.1), std::invalid_argument);
}

TEST_CASE("aoi_approx monotonicity: decreasing in mu, increasing in sigma2") {
  for (double sigma2 : {0.0, 0.05, 0.3, 2.0}) {
    double prev = aoi_approx(0.02, sigma2);
    for (double mu = 0.04; mu <= 1.0; mu += 0.02) {
      const double cur = aoi_approx(mu, sigma2);
      CHECK(cur < prev);
      prev = cur;
    }
  }
  for (double mu : {0.1, 0.5, 1.0}) {
    double prev = aoi_approx(mu, 0.0);
    for (double sigma2 = 0.01; sigma2 <= 1.0; sigma2 += 0.01) {
      const double cur = aoi_approx(mu, sigma2);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("system_variance hand values") {
  const std::vector<double> ones{1.0, 1.0};
  CHECK(system_variance(std::vector<double>{0.3, 0.7}, ones) == doctest::Approx(0.0));
  CHECK(system_variance(std::vector<double>{0.25}, std::vector<double>{0.25}) ==
        doctest::Approx(3.0));
  CHECK(system_variance(std::vector<double>{0.25, 0.5}, std::vector<double>{0.5, 1.0}) ==
        doctest::Approx(0.5));
}

namespace {

// The worked 2-device point: p=[0.5,1], mu=[0.25,0.5], equal y split of
// sqrt(0.5); sigma2 = [0.03125, 0.125].
struct WorkedExample {
  NetworkConfig cfg{2, 1, {0.5, 1.0}};
  SecondOrderPoint point{{0.25, 0.5}, {0.03125, 0.125}};
  TargetPairs pairs{{0.2, 0.4}, {10.0, 10.0}};
};

}  // namespace

TEST_CASE("check_outer: perfect device and the worked example") {
  const NetworkConfig cfg{1, 1, {1.0}};
  const SecondOrderPoint perfect{{1.0}, {0.0}};
  CHECK(check_outer({{1.0}, {1.0}}, perfect, cfg).feasible);

  // AoI >= 1 always, so a ceiling of 0.9 is reported infeasible
  const RegionCheckReport low = check_outer({{1.0}, {0.9}}, perfect, cfg);
  CHECK_FALSE(low.feasible);
  CHECK(low.violated.size() == 1);
  CHECK(low.violated[0].constraint == "aoi_ceiling[0]");

  const WorkedExample ex;
  const RegionCheckReport rep = check_outer(ex.pairs, ex.point, ex.cfg);
  CHECK(rep.feasible);
  CHECK(rep.slack_mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.slack_variance == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("check_inner: strictness and the equality budget") {
  const WorkedExample ex;
  CHECK(check_inner(ex.pairs, ex.point, ex.cfg).feasible);

  // mu_i/p_i = 1 passes outer but fails inner
  const NetworkConfig cfg{1, 1, {0.25}};
  const SecondOrderPoint forced{{0.25}, {0.1875}};
  const TargetPairs pairs{{0.0}, {10.0}};
  CHECK(check_outer(pairs, forced, cfg).feasible);
  CHECK_FALSE(check_inner(pairs, forced, cfg).feasible);

  // surplus device-level variance: outer-only feasible
  SecondOrderPoint slack = ex.point;
  slack.sigma2[0] *= 4.0;  // doubles y_0
  CHECK(check_outer(ex.pairs, slack, ex.cfg).feasible);
  const RegionCheckReport inner = check_inner(ex.pairs, slack, ex.cfg);
  CHECK_FALSE(inner.feasible);
  bool variance_flagged = false;
  for (const auto& v : inner.violated) variance_flagged |= v.constraint == "variance_budget";
  CHECK(variance_flagged);

  CHECK_THROWS_AS(check_inner(ex.pairs, ex.point, ex.cfg, 0.0), std::invalid_argument);
}

TEST_CASE("delta margins move the AoI ceiling in opposite directions") {
  const WorkedExample ex;
  // device 0 approx AoI is 2.75; ceiling 2.8 passes, 2.7 fails without margin
  TargetPairs tight = ex.pairs;
  tight.h = {2.8, 10.0};
  CHECK(check_outer(tight, ex.point, ex.cfg).feasible);
  CHECK(check_inner(tight, ex.point, ex.cfg).feasible);
  const std::vector<double> delta{0.2, 0.0};
  // outer: aoi - delta <= h gets easier; inner: aoi + delta <= h gets harder
  CHECK(check_outer(tight, ex.point, ex.cfg, delta).feasible);
  CHECK_FALSE(check_inner(tight, ex.point, ex.cfg, 1e-3, delta).feasible);
  tight.h = {2.6, 10.0};
  CHECK_FALSE(check_outer(tight, ex.point, ex.cfg).feasible);
  CHECK(check_outer(tight, ex.point, ex.cfg, delta).feasible);
}

TEST_CASE("allocate_variances: symmetry, single device, worked example") {
  const std::vector<double> w{1.0, 1.0};

  // symmetric devices split the budget evenly
  const std::vector<double> mu_sym{0.3, 0.3};
  const std::vector<double> p_sym{0.6, 0.6};
  const std::vector<double> s_sym = allocate_variances(mu_sym, p_sym, w);
  CHECK(s_sym[0] == doctest::Approx(s_sym[1]));

  // N = 1: equality forces sigma2 = p^2 * S^2
  const std::vector<double> s_one =
      allocate_variances(std::vector<double>{0.25}, std::vector<double>{0.25}, std::vector<double>{1.0});
  CHECK(s_one[0] == doctest::Approx(0.0625 * 3.0));

  const std::vector<double> s2 =
      allocate_variances(std::vector<double>{0.25, 0.5}, std::vector<double>{0.5, 1.0}, w);
  CHECK(s2[0] == doctest::Approx(0.03125).epsilon(1e-9));
  CHECK(s2[1] == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("allocate_variances meets the equality budget and beats random allocations") {
  const CounterRng rng(7);
  for (uint64_t trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(3, trial, 0));
    std::vector<double> mu(n), p(n), w(n);
    for (int i = 0; i < n; ++i) {
      p[i] = 0.2 + 0.8 * rng.uniform(trial, 10 + i);
      mu[i] = (0.05 + 0.9 * rng.uniform(trial, 40 + i)) * p[i] / n;
      w[i] = 0.5 + rng.uniform(trial, 70 + i);
    }
    const std::vector<double> sigma2 = allocate_variances(mu, p, w);
    const double total = std::sqrt(system_variance(mu, p));

    double y_sum = 0.0, objective = 0.0;
    for (int i = 0; i < n; ++i) {
      y_sum += std::sqrt(sigma2[i]) / p[i];
      objective += w[i] * sigma2[i] / (mu[i] * mu[i]);
    }
    CHECK(y_sum == doctest::Approx(total).epsilon(1e-12));

    // no random feasible allocation does better
    for (uint64_t draw = 0; draw < 10000; ++draw) {
      std::vector<double> share(n);
      double norm = 0.0;
      for (int i = 0; i < n; ++i) {
        share[i] = -std::log(1.0 - rng.uniform(trial * 100000 + draw, 100 + i));
        norm += share[i];
      }
      double other = 0.0;
      for (int i = 0; i < n; ++i) {
        const double y = total * share[i] / norm;
        other += w[i] * (p[i] * y) * (p[i] * y) / (mu[i] * mu[i]);
      }
      CHECK(other >= objective - 1e-12);
    }
  }
}

TEST_CASE("allocate_variances input validation") {
  CHECK_THROWS(allocate_variances(std::vector<double>{0.0}, std::vector<double>{0.5},
                                  std::vector<double>{1.0}));
  CHECK_THROWS(allocate_variances(std::vector<double>{0.1}, std::vector<double>{0.5},
                                  std::vector<double>{0.0}));
  CHECK_THROWS(allocate_variances(std::vector<double>{0.1, 0.1}, std::vector<double>{0.5},
                                  std::vector<double>{1.0, 1.0}));
}
