#include "rank1check/estimate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rank1check {

namespace {

template <class Reject>
std::uint64_t count_rejections(std::uint64_t trials, std::size_t threads, const Reject& rejects) {
  if (threads == 0) threads = worker_threads();
  threads = static_cast<std::size_t>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, trials / 1024)));
  if (threads <= 1) {
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < trials; ++i) count += rejects(i) ? 1 : 0;
    return count;
  }
  std::vector<std::uint64_t> counts(threads, 0);
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::uint64_t begin = trials * w / threads;
          const std::uint64_t end = trials * (w + 1) / threads;
          std::uint64_t count = 0;
          for (std::uint64_t i = begin; i < end; ++i) count += rejects(i) ? 1 : 0;
          counts[w] = count;
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

RejectionEstimate make_estimate(std::uint64_t trials, std::uint64_t rejections, std::uint64_t seed) {
  RejectionEstimate est;
  est.trials = trials;
  est.rejections = rejections;
  est.estimate = static_cast<double>(rejections) / static_cast<double>(trials);
  est.interval = wilson_interval(rejections, trials);
  est.seed = seed;
  return est;
}

}  // namespace

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("Wilson interval needs at least one trial");
  if (successes > trials) throw std::invalid_argument("more successes than trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  Interval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  // Keep the point estimate inside despite rounding at the endpoints.
  out.lo = std::min(out.lo, p);
  out.hi = std::max(out.hi, p);
  return out;
}

std::size_t worker_threads() {
  if (const char* env = std::getenv("RANK1CHECK_THREADS")) {
    std::size_t value = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc{} && ptr == end && value > 0) return value;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

RejectionEstimate estimate_rejection(const BinaryTensor& f, TestKind kind, std::uint64_t trials, std::uint64_t seed,
                                     std::size_t threads) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  const Shape& shape = f.shape();
  const auto rejections = count_rejections(trials, threads, [&](std::uint64_t i) {
    Rng rng = Rng::stream(seed, i);
    return !trial_accepts(f, sample_randomness(kind, shape, rng));
  });
  return make_estimate(trials, rejections, seed);
}

RejectionEstimate estimate_dp_rejection(const DPFunction& g, double alpha, std::size_t fixed_t, std::uint64_t trials,
                                        std::uint64_t seed, std::size_t threads) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  const DPShape& shape = g.dpshape();
  if (fixed_t > shape.k()) throw std::invalid_argument("t exceeds k");
  const auto rejections = count_rejections(trials, threads, [&](std::uint64_t i) {
    Rng rng = Rng::stream(seed, i);
    if (fixed_t == 0) return !dp_alpha_trial(g, sample_alpha(shape, alpha, rng)).accepted;
    return !dp_fixed_t_trial(g, sample_fixed_t(shape, fixed_t, rng)).accepted;
  });
  return make_estimate(trials, rejections, seed);
}

}  // namespace rank1check
