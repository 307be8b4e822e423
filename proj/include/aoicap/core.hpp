#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoicap {

// Thrown when a requested optimization/projection has an empty feasible set
// (e.g. throughput floors exceed the schedule budget). Maps to CLI exit 2.
struct InfeasibleProblem : std::runtime_error {
  explicit InfeasibleProblem(const std::string& what) : std::runtime_error(what) {}
};

struct NetworkConfig {
  int n_devices = 0;                  // N
  int n_slots_per_round = 0;          // M, devices scheduled per slot, 1 <= M <= N
  std::vector<double> success_probs;  // p_i in (0,1], one per device
};

// Throws std::invalid_argument naming the first violated invariant.
void validate_config(const NetworkConfig& cfg);

// Per-device target mean and temporal variance; the coordinate system of the
// second-order capacity region.
struct SecondOrderPoint {
  std::vector<double> mu;      // deliveries per slot, >= 0
  std::vector<double> sigma2;  // temporal variance in the sqrt(T) scaling, >= 0
};
void validate_point(const SecondOrderPoint& pt, int n_devices);

// Per-device (throughput floor, AoI ceiling) requirement vector.
struct TargetPairs {
  std::vector<double> m;  // throughput floors, >= 0
  std::vector<double> h;  // AoI ceilings in slots, >= 1
};
void validate_pairs(const TargetPairs& pairs, int n_devices);

// Mutable per-trace state. `aoi[i]` is the age the next slot will observe,
// i.e. a_i(t+1) after t completed slots, with a_i(1) = 1.
struct SimState {
  int64_t t = 0;                   // completed slots
  std::vector<int64_t> aoi;        // a_i(t+1), always >= 1
  std::vector<int64_t> delivered;  // cumulative successful deliveries
};
SimState make_initial_state(const NetworkConfig& cfg);

// Histogram of inter-delivery gaps: hist[g] = number of gaps of length g.
using GapHistogram = std::vector<int64_t>;

// Empirical outcome of one trace. Counters (`delivered`, `aoi_sum`) are kept
// in integer form so the derived ratios are exact by construction.
struct TraceMetrics {
  int64_t horizon = 0;
  int64_t block_len = 0;    // batch-means block length actually used
  int64_t x_block_len = 0;  // block length for the projected-process variance
  std::vector<int64_t> delivered;
  std::vector<int64_t> aoi_sum;
  std::vector<double> emp_throughput;  // delivered / horizon
  std::vector<double> emp_aoi;         // aoi_sum / horizon
  std::vector<double> emp_variance;    // batch-means temporal variance
  std::vector<GapHistogram> interdelivery;
  // Projected-process diagnostics: X(t) = M t - sum_{tau<=t} sum_i Z_i(tau)/p_i.
  double x_increment_mean = 0.0;
  double x_increment_se = 0.0;
  double x_variance = 0.0;  // batch-means estimate of Var(X(T))/T
};

}  // namespace aoicap
