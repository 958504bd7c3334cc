#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace mcar {

/// xoshiro256** seeded through SplitMix64. Independent streams are derived by
/// hashing (master seed, key...) so replication r gets the same numbers no
/// matter which thread runs it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);
  double normal();
  double exponential();

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace mcar
