#include "aoicap/core.hpp"

#include <cstdio>

namespace aoicap {

namespace {

std::string at_device(const char* what, int i) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s (device %d)", what, i);
  return buf;
}

}  // namespace

void validate_config(const NetworkConfig& cfg) {
  if (cfg.n_devices < 1) {
    throw std::invalid_argument("n_devices must be >= 1");
  }
  if (cfg.n_slots_per_round < 1 || cfg.n_slots_per_round > cfg.n_devices) {
    throw std::invalid_argument("n_slots_per_round must satisfy 1 <= M <= N");
  }
  if (static_cast<int>(cfg.success_probs.size()) != cfg.n_devices) {
    throw std::invalid_argument("success_probs must have one entry per device");
  }
  for (int i = 0; i < cfg.n_devices; ++i) {
    const double p = cfg.success_probs[i];
    if (!(p > 0.0) || p > 1.0) {
      throw std::invalid_argument(at_device("success_probs must lie in (0,1]", i));
    }
  }
}

void validate_point(const SecondOrderPoint& pt, int n_devices) {
  if (static_cast<int>(pt.mu.size()) != n_devices ||
      static_cast<int>(pt.sigma2.size()) != n_devices) {
    throw std::invalid_argument("second-order point has wrong dimension");
  }
  for (int i = 0; i < n_devices; ++i) {
    if (!(pt.mu[i] >= 0.0)) throw std::invalid_argument(at_device("mu must be >= 0", i));
    if (!(pt.sigma2[i] >= 0.0)) throw std::invalid_argument(at_device("sigma2 must be >= 0", i));
  }
}

void validate_pairs(const TargetPairs& pairs, int n_devices) {
  if (static_cast<int>(pairs.m.size()) != n_devices ||
      static_cast<int>(pairs.h.size()) != n_devices) {
    throw std::invalid_argument("target pairs have wrong dimension");
  }
  for (int i = 0; i < n_devices; ++i) {
    if (!(pairs.m[i] >= 0.0)) throw std::invalid_argument(at_device("throughput floor must be >= 0", i));
    if (!(pairs.h[i] >= 1.0)) throw std::invalid_argument(at_device("AoI ceiling must be >= 1", i));
  }
}

SimState make_initial_state(const NetworkConfig& cfg) {
  validate_config(cfg);
  SimState s;
  s.t = 0;
  s.aoi.assign(cfg.n_devices, 1);  // as if every device delivered at slot 0
  s.delivered.assign(cfg.n_devices, 0);
  return s;
}

}  // namespace aoicap
