#pragma once

#include <cstdint>
#include <random>

#include "ordset.hpp"

namespace pforce {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded generator with library-independent draws, so a seed yields the
/// same stream on every standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Independent stream for trial `index` of a run seeded with `seed`.
  static Rng for_trial(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed) ^ splitmix64(index + 0x5851f42d4c957f2dULL));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  /// Each element of `set` kept independently with probability p.
  OrdSet subset(OrdSet set, double p = 0.5) {
    OrdSet out;
    for (Ordinal x : set)
      if (chance(p)) out.insert(x);
    return out;
  }

  /// Uniformly chosen element; `set` must be nonempty.
  Ordinal pick(OrdSet set) {
    auto k = below(set.size());
    for (Ordinal x : set) {
      if (k == 0) return x;
      --k;
    }
    return set.max();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pforce
