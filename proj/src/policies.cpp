#include "aoicap/policies.hpp"

#include "aoicap/region.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aoicap {

const char* policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::vwd: return "vwd";
    case PolicyKind::maxweight: return "maxweight";
    case PolicyKind::random_uniform: return "random";
  }
  return "?";
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "vwd") return PolicyKind::vwd;
  if (name == "maxweight") return PolicyKind::maxweight;
  if (name == "random") return PolicyKind::random_uniform;
  throw std::invalid_argument("unknown policy: " + name);
}

PolicySpec PolicySpec::vwd(SecondOrderPoint targets) {
  PolicySpec spec;
  spec.kind = PolicyKind::vwd;
  spec.targets = std::move(targets);
  return spec;
}

PolicySpec PolicySpec::maxweight(std::vector<double> q, double v) {
  PolicySpec spec;
  spec.kind = PolicyKind::maxweight;
  spec.q = std::move(q);
  spec.v_param = v;
  return spec;
}

PolicySpec PolicySpec::random() {
  PolicySpec spec;
  spec.kind = PolicyKind::random_uniform;
  return spec;
}

std::vector<double> compute_deficits(const SimState& state, const SecondOrderPoint& targets) {
  const size_t n = state.delivered.size();
  if (targets.mu.size() != n || targets.sigma2.size() != n) {
    throw std::invalid_argument("targets have wrong dimension");
  }
  std::vector<double> d(n);
  const double t = static_cast<double>(state.t);
  for (size_t i = 0; i < n; ++i) {
    if (!(targets.sigma2[i] >= 0.0)) throw std::invalid_argument("sigma2 must be >= 0");
    const double denom = std::sqrt(std::max(targets.sigma2[i], kSigmaFloor));
    d[i] = (t * targets.mu[i] - static_cast<double>(state.delivered[i])) / denom;
  }
  return d;
}

std::vector<int> top_m_indices(std::span<const double> values, int m) {
  const int n = static_cast<int>(values.size());
  if (m < 0 || m > n) throw std::invalid_argument("m out of range");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + m, idx.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<int> vwd_select(const SimState& state, const SecondOrderPoint& targets, int m) {
  const std::vector<double> d = compute_deficits(state, targets);
  return top_m_indices(d, m);
}

double maxweight_weight(int64_t aoi, double debt, double alpha, double p, double v) {
  const double a = static_cast<double>(aoi);
  return 0.5 * alpha * p * a * (a + 2.0) + v * p * std::max(debt, 0.0);
}

std::vector<int> maxweight_select(const SimState& state, MaxWeightState& mw,
                                  const NetworkConfig& cfg, int m) {
  const int n = cfg.n_devices;
  mw.debts.resize(n);
  std::vector<double> weights(n);
  const double t = static_cast<double>(state.t);
  for (int i = 0; i < n; ++i) {
    mw.debts[i] = t * mw.throughput_reqs[i] - static_cast<double>(state.delivered[i]);
    weights[i] = maxweight_weight(state.aoi[i], mw.debts[i], mw.alpha[i],
                                  cfg.success_probs[i], mw.v_param);
  }
  return top_m_indices(weights, m);
}

std::vector<int> random_select(int n, int m, const CounterRng& rng, uint64_t slot) {
  if (m < 0 || m > n) throw std::invalid_argument("m out of range");
  // Partial Fisher-Yates over lanes n, n+1, ... (channel draws own 0..n-1).
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int j = 0; j < m; ++j) {
    const int k = j + static_cast<int>(rng.below(static_cast<uint64_t>(n - j), slot,
                                                 static_cast<uint64_t>(n + j)));
    std::swap(pool[j], pool[k]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

double system_deficit(std::span<const double> deficits, const SecondOrderPoint& targets,
                      std::span<const double> p) {
  double num = 0.0;
  double den = 0.0;
  for (size_t i = 0; i < deficits.size(); ++i) {
    const double w = std::sqrt(std::max(targets.sigma2[i], kSigmaFloor)) / p[i];
    num += w * deficits[i];
    den += w;
  }
  return num / den;
}

namespace {

class VwdPolicy : public Policy {
 public:
  explicit VwdPolicy(SecondOrderPoint targets) { state_.targets = std::move(targets); }

  void select_into(const SimState& state, std::vector<int>& out, const CounterRng&,
                   uint64_t) override {
    state_.deficits = compute_deficits(state, state_.targets);
    out = top_m_indices(state_.deficits, m_);
  }
  const char* name() const override { return "vwd"; }

  void set_m(int m) { m_ = m; }

 private:
  VwdState state_;
  int m_ = 1;
};

class MaxWeightPolicy : public Policy {
 public:
  MaxWeightPolicy(MaxWeightState st, NetworkConfig cfg) : state_(std::move(st)), cfg_(std::move(cfg)) {}

  void select_into(const SimState& state, std::vector<int>& out, const CounterRng&,
                   uint64_t) override {
    out = maxweight_select(state, state_, cfg_, cfg_.n_slots_per_round);
  }
  const char* name() const override { return "maxweight"; }

 private:
  MaxWeightState state_;
  NetworkConfig cfg_;
};

class RandomPolicy : public Policy {
 public:
  RandomPolicy(int n, int m) : n_(n), m_(m) {}

  void select_into(const SimState&, std::vector<int>& out, const CounterRng& rng,
                   uint64_t slot) override {
    out = random_select(n_, m_, rng, slot);
  }
  const char* name() const override { return "random"; }

 private:
  int n_;
  int m_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const NetworkConfig& cfg) {
  validate_config(cfg);
  const int n = cfg.n_devices;
  switch (spec.kind) {
    case PolicyKind::vwd: {
      validate_point(spec.targets, n);
      auto policy = std::make_unique<VwdPolicy>(spec.targets);
      policy->set_m(cfg.n_slots_per_round);
      return policy;
    }
    case PolicyKind::maxweight: {
      if (static_cast<int>(spec.q.size()) != n) {
        throw std::invalid_argument("maxweight q has wrong dimension");
      }
      MaxWeightState st;
      st.throughput_reqs = spec.q;
      st.alpha = spec.alpha.empty() ? std::vector<double>(n, 1.0) : spec.alpha;
      if (static_cast<int>(st.alpha.size()) != n) {
        throw std::invalid_argument("maxweight alpha has wrong dimension");
      }
      st.v_param = spec.v_param < 0.0 ? static_cast<double>(n) * n : spec.v_param;
      return std::make_unique<MaxWeightPolicy>(std::move(st), cfg);
    }
    case PolicyKind::random_uniform:
      return std::make_unique<RandomPolicy>(n, cfg.n_slots_per_round);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace aoicap
