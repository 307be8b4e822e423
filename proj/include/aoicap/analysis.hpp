#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aoicap/core.hpp"

namespace aoicap {

// Batch-means temporal-variance estimator over a 0/1 delivery series:
// partition into K = floor(T/L) blocks, sigma2_hat = mean of
// ((S_k - L*mu_hat)/sqrt(L))^2. Throws if T < 10*L.
double estimate_temporal_variance(std::span<const uint8_t> series, double mu_hat,
                                  int64_t block_len);

// Same estimator when the per-block sums are already accumulated (the
// simulator keeps these instead of the full indicator series).
double temporal_variance_from_block_sums(std::span<const double> block_sums,
                                         int64_t block_len, double mu_hat);

// Right-continuous empirical CDF over integer-valued samples.
class EmpiricalCdf {
 public:
  static EmpiricalCdf from_samples(std::span<const int64_t> samples);
  // hist[g] = count of samples equal to g.
  static EmpiricalCdf from_histogram(const GapHistogram& hist);

  double operator()(double x) const;  // fraction of samples <= x
  int64_t n_samples() const { return total_; }
  double mean() const;
  int64_t max_value() const { return values_.empty() ? 0 : values_.back(); }

 private:
  std::vector<int64_t> values_;      // sorted distinct sample values
  std::vector<int64_t> cum_counts_;  // cumulative counts
  int64_t total_ = 0;
};

// CDF of the inverse Gaussian distribution with the given mean and shape:
// Phi(sqrt(shape/x)(x/mean - 1)) + exp(2 shape/mean) Phi(-sqrt(shape/x)(x/mean + 1)).
// The second term is evaluated in log space so large shape/mean is safe.
double inverse_gaussian_cdf(double x, double mean, double shape);

// Renewal map from a second-order target to the IG inter-delivery model:
// gap mean 1/mu, gap variance sigma2/mu^3  =>  mean = 1/mu, shape = 1/sigma2.
struct IgFit {
  double mean = 0.0;
  double shape = 0.0;
};
IgFit fit_inverse_gaussian(double mu, double sigma2);

// max over k in {1..x_max} of |F_hat(k) - F(k)|.
double cdf_max_gap(const EmpiricalCdf& emp, const std::function<double(double)>& model,
                   int64_t x_max);

}  // namespace aoicap
