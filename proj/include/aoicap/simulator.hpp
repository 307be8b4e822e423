#pragma once

#include <cstdint>
#include <vector>

#include "aoicap/core.hpp"
#include "aoicap/policies.hpp"
#include "aoicap/rng.hpp"

namespace aoicap {

// Outcome of one slot: the scheduled M-subset and per-device success
// indicators (Z_i = 0 for every unscheduled device; no draw is made).
struct SlotResult {
  std::vector<int> scheduled;
  std::vector<uint8_t> successes;
};

// Executes slot state.t + 1: draws Bernoulli(p_i) for scheduled devices,
// applies the AoI recursion (reset to 1 on success, +1 otherwise), advances
// delivered counts and t. Throws on schedules of wrong cardinality,
// out-of-range or duplicate indices.
void step(SimState& state, const std::vector<int>& schedule, const NetworkConfig& cfg,
          const CounterRng& rng, SlotResult& out);
SlotResult step(SimState& state, const std::vector<int>& schedule, const NetworkConfig& cfg,
                const CounterRng& rng);

struct TraceOptions {
  int64_t block_len = 10000;   // batch-means block for per-device variance
  int64_t x_block_len = 1000;  // batch-means block for Var(X(T))/T
};

// Runs exactly `horizon` slots under the given policy; bit-identical output
// for identical (cfg, spec, horizon, seed).
TraceMetrics run_trace(const NetworkConfig& cfg, const PolicySpec& spec, int64_t horizon,
                       uint64_t seed, const TraceOptions& opts = {});

// Trace k of an ensemble uses seed = base_seed + k. Parallel across traces;
// results are identical regardless of thread count.
std::vector<TraceMetrics> run_ensemble_traces(const NetworkConfig& cfg, const PolicySpec& spec,
                                              int64_t horizon, int n_traces, uint64_t base_seed,
                                              const TraceOptions& opts = {}, int n_threads = 0);

// Cross-trace mean and standard error per field; histograms merged by sum.
struct EnsembleMetrics {
  int n_traces = 0;
  int64_t horizon = 0;
  std::vector<double> mean_throughput, se_throughput;
  std::vector<double> mean_aoi, se_aoi;
  std::vector<double> mean_variance, se_variance;
  double mean_x_increment = 0.0, se_x_increment = 0.0;
  double mean_x_variance = 0.0, se_x_variance = 0.0;
  std::vector<GapHistogram> interdelivery;
};

EnsembleMetrics aggregate(const std::vector<TraceMetrics>& traces);

EnsembleMetrics run_ensemble(const NetworkConfig& cfg, const PolicySpec& spec, int64_t horizon,
                             int n_traces, uint64_t base_seed, const TraceOptions& opts = {},
                             int n_threads = 0);

}  // namespace aoicap
