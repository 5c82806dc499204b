#pragma once

#include <cstdint>
#include <limits>

namespace rank1check {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of stream `stream` under master seed `master`. Streams are
/// independent of evaluation order, so trial i always sees the same draws.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(mix64(master) ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

/// SplitMix64 generator; satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}
  static Rng stream(std::uint64_t master, std::uint64_t stream) noexcept { return Rng(derive_seed(master, stream)); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Uniform on [0, 1) with 53 bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) noexcept { return uniform01() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace rank1check
