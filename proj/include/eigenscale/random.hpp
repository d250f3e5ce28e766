#pragma once

// Portable seeded randomness. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the draws below are implemented
// here because std distributions differ between library vendors.
//
//   substream seed = splitmix64 chain over (master, tags...)
//   uniform01      = (engine() >> 11) * 2^-53
//   uniform_index  = rejection sampling on the top bits
//   normal         = Marsaglia polar method, second variate cached

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>

namespace eigenscale {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic seed for a substream identified by `tags`.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  /// Uniform on [0, bound).
  std::uint64_t uniform_index(std::uint64_t bound);
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace eigenscale
