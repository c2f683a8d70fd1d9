#pragma once

#include <cstdint>
#include <random>

namespace farf {

/// splitmix64 finalizer; mixes a 64-bit value into a well-distributed one.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a sub-stream, e.g. derive_seed(master, tree_index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// mt19937_64 plus distribution helpers whose output is fixed by this code
/// rather than by the standard library implementation, so seeded results are
/// reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller (cached second value).
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace farf
