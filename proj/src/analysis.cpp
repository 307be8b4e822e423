#include "aoicap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aoicap {

namespace {

// log Phi(-b) for b >= 0. Direct erfc below the underflow knee, asymptotic
// Mills-ratio expansion above it.
double log_norm_cdf_neg(double b) {
  const double z = b / std::sqrt(2.0);
  if (b < 36.0) {
    return std::log(0.5 * std::erfc(z));
  }
  const double b2 = b * b;
  const double series = 1.0 - 1.0 / b2 + 3.0 / (b2 * b2);
  return -0.5 * b2 - std::log(b) - 0.5 * std::log(2.0 * M_PI) + std::log(series);
}

}  // namespace

double temporal_variance_from_block_sums(std::span<const double> block_sums,
                                         int64_t block_len, double mu_hat) {
  if (block_sums.empty()) throw std::invalid_argument("no complete blocks");
  if (block_len < 1) throw std::invalid_argument("block_len must be >= 1");
  const double scale = std::sqrt(static_cast<double>(block_len));
  double acc = 0.0;
  for (double s : block_sums) {
    const double dev = (s - static_cast<double>(block_len) * mu_hat) / scale;
    acc += dev * dev;
  }
  return acc / static_cast<double>(block_sums.size());
}

double estimate_temporal_variance(std::span<const uint8_t> series, double mu_hat,
                                  int64_t block_len) {
  const int64_t t = static_cast<int64_t>(series.size());
  if (block_len < 1) throw std::invalid_argument("block_len must be >= 1");
  if (t < 10 * block_len) {
    throw std::invalid_argument("series too short: need T >= 10 * block_len");
  }
  const int64_t k = t / block_len;
  std::vector<double> sums(static_cast<size_t>(k), 0.0);
  for (int64_t b = 0; b < k; ++b) {
    int64_t s = 0;
    const uint8_t* begin = series.data() + b * block_len;
    for (int64_t j = 0; j < block_len; ++j) s += begin[j];
    sums[static_cast<size_t>(b)] = static_cast<double>(s);
  }
  return temporal_variance_from_block_sums(sums, block_len, mu_hat);
}

EmpiricalCdf EmpiricalCdf::from_samples(std::span<const int64_t> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical CDF needs at least one sample");
  std::vector<int64_t> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  EmpiricalCdf cdf;
  for (int64_t v : sorted) {
    if (cdf.values_.empty() || cdf.values_.back() != v) {
      cdf.values_.push_back(v);
      cdf.cum_counts_.push_back(cdf.total_ + 1);
    } else {
      cdf.cum_counts_.back() += 1;
    }
    ++cdf.total_;
  }
  return cdf;
}

EmpiricalCdf EmpiricalCdf::from_histogram(const GapHistogram& hist) {
  EmpiricalCdf cdf;
  for (size_t g = 0; g < hist.size(); ++g) {
    if (hist[g] <= 0) continue;
    cdf.total_ += hist[g];
    cdf.values_.push_back(static_cast<int64_t>(g));
    cdf.cum_counts_.push_back(cdf.total_);
  }
  if (cdf.total_ == 0) throw std::invalid_argument("empirical CDF needs at least one sample");
  return cdf;
}

double EmpiricalCdf::operator()(double x) const {
  // index of the last value <= x
  auto it = std::upper_bound(values_.begin(), values_.end(), x,
                             [](double lhs, int64_t rhs) { return lhs < static_cast<double>(rhs); });
  if (it == values_.begin()) return 0.0;
  const size_t idx = static_cast<size_t>(it - values_.begin()) - 1;
  return static_cast<double>(cum_counts_[idx]) / static_cast<double>(total_);
}

double EmpiricalCdf::mean() const {
  double acc = 0.0;
  int64_t prev = 0;
  for (size_t i = 0; i < values_.size(); ++i) {
    const int64_t count = cum_counts_[i] - prev;
    prev = cum_counts_[i];
    acc += static_cast<double>(count) * static_cast<double>(values_[i]);
  }
  return acc / static_cast<double>(total_);
}

double inverse_gaussian_cdf(double x, double mean, double shape) {
  if (!(mean > 0.0)) throw std::invalid_argument("IG mean must be > 0");
  if (!(shape > 0.0)) throw std::invalid_argument("IG shape must be > 0");
  if (std::isnan(x)) throw std::invalid_argument("IG cdf: x is NaN");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;

  const double s = std::sqrt(shape / x);
  const double a = s * (x / mean - 1.0);
  const double b = s * (x / mean + 1.0);
  const double first = 0.5 * std::erfc(-a / std::sqrt(2.0));
  const double log_second = 2.0 * shape / mean + log_norm_cdf_neg(b);
  const double second = log_second < -745.0 ? 0.0 : std::exp(log_second);
  return std::clamp(first + second, 0.0, 1.0);
}

IgFit fit_inverse_gaussian(double mu, double sigma2) {
  if (!(mu > 0.0)) throw std::invalid_argument("IG fit requires mu > 0");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("IG fit requires sigma2 > 0");
  return {1.0 / mu, 1.0 / sigma2};
}

double cdf_max_gap(const EmpiricalCdf& emp, const std::function<double(double)>& model,
                   int64_t x_max) {
  if (x_max < 1) throw std::invalid_argument("cdf_max_gap requires x_max >= 1");
  double worst = 0.0;
  for (int64_t k = 1; k <= x_max; ++k) {
    const double x = static_cast<double>(k);
    worst = std::max(worst, std::abs(emp(x) - model(x)));
  }
  return worst;
}

}  // namespace aoicap
