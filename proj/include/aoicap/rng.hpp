#pragma once

#include <cstdint>

namespace aoicap {

// Counter-based uniform generator. Every draw is a pure function of
// (seed, stream, slot, lane), so a trace replays bit-identically no matter
// how work is scheduled across threads. Lanes 0..N-1 are reserved for the
// per-device channel draws of a slot; policies draw from lanes >= N.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : base_(mix(mix(seed + 0x632be59bd9b4e019ULL) ^ (stream * 0x9e3779b97f4a7c15ULL))) {}

  uint64_t bits(uint64_t slot, uint64_t lane) const {
    return mix(mix(base_ ^ (slot * 0xd1342543de82ef95ULL)) ^ (lane * 0xaf251af3b0f025b5ULL));
  }

  // U[0,1) with 53-bit resolution; never returns 1.0, so p=1 channels
  // succeed deterministically under `uniform() < p`.
  double uniform(uint64_t slot, uint64_t lane) const {
    return static_cast<double>(bits(slot, lane) >> 11) * 0x1.0p-53;
  }

  // Draw in {0, 1, ..., n-1} (n > 0) via 128-bit multiply; bias is O(2^-64).
  uint64_t below(uint64_t n, uint64_t slot, uint64_t lane) const {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(bits(slot, lane)) * n) >> 64);
  }

  static uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  uint64_t base_;
};

}  // namespace aoicap
