#pragma once

// Monte-Carlo rejection estimates with Wilson score intervals.

#include "rank1check/agreement.hpp"
#include "rank1check/core.hpp"
#include "rank1check/testers.hpp"

#include <cstddef>
#include <cstdint>

namespace rank1check {

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Interval {
  double lo = 0;
  double hi = 1;
};

/// Wilson score interval for `successes` out of `trials` (trials >= 1).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ95);

struct RejectionEstimate {
  std::uint64_t trials = 0;
  std::uint64_t rejections = 0;
  double estimate = 0;
  Interval interval;
  std::uint64_t seed = 0;

  bool covers(double p) const noexcept { return interval.lo <= p && p <= interval.hi; }
};

/// Worker count: RANK1CHECK_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
std::size_t worker_threads();

/// Trial i draws its randomness from Rng::stream(seed, i), so the result does
/// not depend on how trials are split across `threads` workers (0 = worker_threads()).
RejectionEstimate estimate_rejection(const BinaryTensor& f, TestKind kind, std::uint64_t trials, std::uint64_t seed,
                                     std::size_t threads = 0);

/// Same for the direct-product tests: T(alpha) when `fixed_t` is 0, else T(fixed_t).
RejectionEstimate estimate_dp_rejection(const DPFunction& g, double alpha, std::size_t fixed_t, std::uint64_t trials,
                                        std::uint64_t seed, std::size_t threads = 0);

}  // namespace rank1check
