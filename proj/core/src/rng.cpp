#include "rank1check/rng.hpp"

namespace rank1check {

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  if ((n & (n - 1)) == 0) return (*this)() & (n - 1);
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = max() - (max() % n + 1) % n;
  std::uint64_t v = (*this)();
  while (v > limit) v = (*this)();
  return v % n;
}

}  // namespace rank1check
