#pragma once

#include <memory>
#include <span>
#include <vector>

#include "aoicap/core.hpp"
#include "aoicap/rng.hpp"

namespace aoicap {

enum class PolicyKind { vwd, maxweight, random_uniform };

const char* policy_kind_name(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);  // throws on unknown

// Identifier + parameters; only the fields relevant to `kind` are read.
struct PolicySpec {
  PolicyKind kind = PolicyKind::random_uniform;
  SecondOrderPoint targets;        // vwd: target (mu, sigma2)
  std::vector<double> q;           // maxweight: throughput requirements
  std::vector<double> alpha;       // maxweight: weights, default all 1
  double v_param = -1.0;           // maxweight: V, default N^2 when < 0

  static PolicySpec vwd(SecondOrderPoint targets);
  static PolicySpec maxweight(std::vector<double> q, double v = -1.0);
  static PolicySpec random();
};

// VWD scratch: deficits d_i(t) = (t*mu_i - delivered_i)/sqrt(sigma2_i),
// recomputable from SimState at any time.
struct VwdState {
  SecondOrderPoint targets;
  std::vector<double> deficits;
};

// Max-Weight scratch: debts x_i(t+1) = t*q_i - delivered_i.
struct MaxWeightState {
  std::vector<double> throughput_reqs;  // q_i
  std::vector<double> alpha;            // alpha_i
  double v_param = 0.0;                 // V
  std::vector<double> debts;
};

// d_i = (t*mu_i - delivered_i)/sqrt(max(sigma2_i, kSigmaFloor)).
// Throws on negative sigma2 or dimension mismatch.
std::vector<double> compute_deficits(const SimState& state, const SecondOrderPoint& targets);

// The M indices with the largest values; ties broken by lowest index.
// Returned sorted ascending.
std::vector<int> top_m_indices(std::span<const double> values, int m);

std::vector<int> vwd_select(const SimState& state, const SecondOrderPoint& targets, int m);

// W = (alpha*p/2) * a * (a + 2) + V * p * max(debt, 0).
double maxweight_weight(int64_t aoi, double debt, double alpha, double p, double v);

std::vector<int> maxweight_select(const SimState& state, MaxWeightState& mw,
                                  const NetworkConfig& cfg, int m);

// Uniformly distributed M-subset of {0..n-1}; draws from lanes n, n+1, ...
std::vector<int> random_select(int n, int m, const CounterRng& rng, uint64_t slot);

// System-wide deficit D(t): the sqrt(sigma2_i/p_i^2)-weighted average of the
// deficits. Used by stability diagnostics and tests.
double system_deficit(std::span<const double> deficits, const SecondOrderPoint& targets,
                      std::span<const double> p);

class Policy {
 public:
  virtual ~Policy() = default;
  // Chooses the schedule for slot state.t + 1.
  virtual void select_into(const SimState& state, std::vector<int>& out,
                           const CounterRng& rng, uint64_t slot) = 0;
  virtual const char* name() const = 0;
};

// Validates spec parameters against cfg (dimensions, nonnegativity).
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const NetworkConfig& cfg);

}  // namespace aoicap
