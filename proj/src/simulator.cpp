#include "aoicap/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "aoicap/analysis.hpp"

namespace aoicap {

namespace {

void validate_schedule(const std::vector<int>& schedule, const NetworkConfig& cfg) {
  if (static_cast<int>(schedule.size()) != cfg.n_slots_per_round) {
    throw std::invalid_argument("schedule must contain exactly M devices");
  }
  thread_local std::vector<char> seen;
  seen.assign(cfg.n_devices, 0);
  for (int i : schedule) {
    if (i < 0 || i >= cfg.n_devices) throw std::invalid_argument("schedule index out of range");
    if (seen[i]) throw std::invalid_argument("schedule contains a duplicate device");
    seen[i] = 1;
  }
}

double sample_se(double sum, double sumsq, int64_t n) {
  if (n < 2) return 0.0;
  const double mean = sum / static_cast<double>(n);
  double var = (sumsq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
  var = std::max(var, 0.0);
  return std::sqrt(var / static_cast<double>(n));
}

}  // namespace

void step(SimState& state, const std::vector<int>& schedule, const NetworkConfig& cfg,
          const CounterRng& rng, SlotResult& out) {
  validate_schedule(schedule, cfg);
  const int n = cfg.n_devices;
  if (static_cast<int>(state.aoi.size()) != n || static_cast<int>(state.delivered.size()) != n) {
    throw std::invalid_argument("state has wrong dimension");
  }
  const uint64_t slot = static_cast<uint64_t>(state.t) + 1;
  out.scheduled = schedule;
  out.successes.assign(n, 0);
  for (int i : schedule) {
    if (rng.uniform(slot, static_cast<uint64_t>(i)) < cfg.success_probs[i]) {
      out.successes[i] = 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (out.successes[i]) {
      state.aoi[i] = 1;
      state.delivered[i] += 1;
    } else {
      state.aoi[i] += 1;
    }
  }
  state.t = static_cast<int64_t>(slot);
}

SlotResult step(SimState& state, const std::vector<int>& schedule, const NetworkConfig& cfg,
                const CounterRng& rng) {
  SlotResult out;
  step(state, schedule, cfg, rng, out);
  return out;
}

TraceMetrics run_trace(const NetworkConfig& cfg, const PolicySpec& spec, int64_t horizon,
                       uint64_t seed, const TraceOptions& opts) {
  validate_config(cfg);
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  auto policy = make_policy(spec, cfg);

  const int n = cfg.n_devices;
  const int64_t block_len = std::clamp<int64_t>(opts.block_len, 1, std::max<int64_t>(horizon / 10, 1));
  const int64_t x_block_len = std::clamp<int64_t>(opts.x_block_len, 1, std::max<int64_t>(horizon / 10, 1));

  SimState state = make_initial_state(cfg);
  const CounterRng rng(seed);

  std::vector<int64_t> aoi_sum(n, 0);
  std::vector<int64_t> block_count(n, 0);
  std::vector<std::vector<double>> block_sums(n);
  std::vector<int64_t> last_delivery(n, 0);
  std::vector<GapHistogram> gaps(n);
  double x_sum = 0.0, x_sumsq = 0.0, x_block = 0.0;
  std::vector<double> x_blocks;

  std::vector<int> schedule;
  schedule.reserve(cfg.n_slots_per_round);
  SlotResult slot_result;

  for (int64_t slot = 1; slot <= horizon; ++slot) {
    policy->select_into(state, schedule, rng, static_cast<uint64_t>(slot));
    for (int i = 0; i < n; ++i) aoi_sum[i] += state.aoi[i];

    step(state, schedule, cfg, rng, slot_result);

    double dx = static_cast<double>(cfg.n_slots_per_round);
    for (int i : schedule) {
      if (slot_result.successes[i]) {
        dx -= 1.0 / cfg.success_probs[i];
        block_count[i] += 1;
        if (last_delivery[i] > 0) {
          const size_t gap = static_cast<size_t>(slot - last_delivery[i]);
          if (gaps[i].size() <= gap) gaps[i].resize(gap + 1, 0);
          gaps[i][gap] += 1;
        }
        last_delivery[i] = slot;
      }
    }
    x_sum += dx;
    x_sumsq += dx * dx;
    x_block += dx;

    if (slot % block_len == 0) {
      for (int i = 0; i < n; ++i) {
        block_sums[i].push_back(static_cast<double>(block_count[i]));
        block_count[i] = 0;
      }
    }
    if (slot % x_block_len == 0) {
      x_blocks.push_back(x_block);
      x_block = 0.0;
    }
  }

  TraceMetrics m;
  m.horizon = horizon;
  m.block_len = block_len;
  m.x_block_len = x_block_len;
  m.delivered = state.delivered;
  m.aoi_sum = std::move(aoi_sum);
  m.interdelivery = std::move(gaps);
  m.emp_throughput.resize(n);
  m.emp_aoi.resize(n);
  m.emp_variance.resize(n);
  const double t = static_cast<double>(horizon);
  for (int i = 0; i < n; ++i) {
    m.emp_throughput[i] = static_cast<double>(m.delivered[i]) / t;
    m.emp_aoi[i] = static_cast<double>(m.aoi_sum[i]) / t;
    m.emp_variance[i] = block_sums[i].empty()
                            ? 0.0
                            : temporal_variance_from_block_sums(block_sums[i], block_len,
                                                                m.emp_throughput[i]);
  }
  m.x_increment_mean = x_sum / t;
  m.x_increment_se = sample_se(x_sum, x_sumsq, horizon);
  m.x_variance = x_blocks.empty()
                     ? 0.0
                     : temporal_variance_from_block_sums(x_blocks, x_block_len, m.x_increment_mean);
  return m;
}

std::vector<TraceMetrics> run_ensemble_traces(const NetworkConfig& cfg, const PolicySpec& spec,
                                              int64_t horizon, int n_traces, uint64_t base_seed,
                                              const TraceOptions& opts, int n_threads) {
  if (n_traces < 1) throw std::invalid_argument("n_traces must be >= 1");
  std::vector<TraceMetrics> results(static_cast<size_t>(n_traces));
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const int workers = std::min(n_traces, n_threads > 0 ? n_threads : hw);

  if (workers <= 1) {
    for (int k = 0; k < n_traces; ++k) {
      results[k] = run_trace(cfg, spec, horizon, base_seed + static_cast<uint64_t>(k), opts);
    }
    return results;
  }

  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  auto work = [&]() {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= n_traces) return;
      try {
        results[k] = run_trace(cfg, spec, horizon, base_seed + static_cast<uint64_t>(k), opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return results;
}

EnsembleMetrics aggregate(const std::vector<TraceMetrics>& traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate needs at least one trace");
  const int n = static_cast<int>(traces.front().emp_throughput.size());
  const int k = static_cast<int>(traces.size());

  EnsembleMetrics e;
  e.n_traces = k;
  e.horizon = traces.front().horizon;
  e.mean_throughput.assign(n, 0.0);
  e.se_throughput.assign(n, 0.0);
  e.mean_aoi.assign(n, 0.0);
  e.se_aoi.assign(n, 0.0);
  e.mean_variance.assign(n, 0.0);
  e.se_variance.assign(n, 0.0);
  e.interdelivery.assign(n, {});

  auto mean_se = [k](auto get, double& mean, double& se) {
    double sum = 0.0, sumsq = 0.0;
    for (int j = 0; j < k; ++j) {
      const double v = get(j);
      sum += v;
      sumsq += v * v;
    }
    mean = sum / k;
    se = sample_se(sum, sumsq, k);
  };

  for (int i = 0; i < n; ++i) {
    mean_se([&](int j) { return traces[j].emp_throughput[i]; }, e.mean_throughput[i],
            e.se_throughput[i]);
    mean_se([&](int j) { return traces[j].emp_aoi[i]; }, e.mean_aoi[i], e.se_aoi[i]);
    mean_se([&](int j) { return traces[j].emp_variance[i]; }, e.mean_variance[i],
            e.se_variance[i]);
    for (int j = 0; j < k; ++j) {
      const GapHistogram& h = traces[j].interdelivery[i];
      if (e.interdelivery[i].size() < h.size()) e.interdelivery[i].resize(h.size(), 0);
      for (size_t g = 0; g < h.size(); ++g) e.interdelivery[i][g] += h[g];
    }
  }
  mean_se([&](int j) { return traces[j].x_increment_mean; }, e.mean_x_increment,
          e.se_x_increment);
  mean_se([&](int j) { return traces[j].x_variance; }, e.mean_x_variance, e.se_x_variance);
  return e;
}

EnsembleMetrics run_ensemble(const NetworkConfig& cfg, const PolicySpec& spec, int64_t horizon,
                             int n_traces, uint64_t base_seed, const TraceOptions& opts,
                             int n_threads) {
  return aggregate(run_ensemble_traces(cfg, spec, horizon, n_traces, base_seed, opts, n_threads));
}

}  // namespace aoicap
