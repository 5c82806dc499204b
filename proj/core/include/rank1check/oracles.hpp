#pragma once

// Exhaustive ground truth at desk scale: exact rejection probabilities,
// nearest direct sums and affine functions, local-view decoding and the
// biased-character closed form. Everything returned here is exact; when an
// enumeration would exceed the configured budget the oracle refuses with
// BudgetExceeded instead of sampling.

#include "rank1check/core.hpp"
#include "rank1check/testers.hpp"

#include <cstdint>
#include <span>

namespace rank1check {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 32;

/// rejecting / total over the test's randomness space. Tests whose draws are
/// not uniform over a product space (sic-cube, conjectured) report counts in
/// units of the common denominator |X|^2 4^d (resp. |X|^2 2^d).
struct ExactRejection {
  BigInt rejecting;
  BigInt total;

  Rational value() const { return Rational(rejecting, total); }
};

struct NearestDirectSum {
  DirectSum witness;
  Rational distance;
};

/// x -> c (+) sum_{i in support} x_i on a binary cube.
struct AffineFunction {
  IndexSet support;
  bool constant = false;

  bool operator()(const Point& x) const;
  BinaryTensor materialize(const Shape& cube) const;

  friend bool operator==(const AffineFunction&, const AffineFunction&) = default;
};

struct NearestAffine {
  AffineFunction witness;
  Rational distance;
};

/// Nearest affine function to a cube truth table of length 2^k (k >= 0) in
/// local indexing: bit r of the index is the r-th cube coordinate, and bit r
/// of the returned support is that coordinate.
struct CubeAffineFit {
  std::uint64_t support = 0;
  bool constant = false;
  std::uint64_t mismatches = 0;
};
CubeAffineFit nearest_affine_on_cube(std::span<const std::uint8_t> table);

class Oracle {
 public:
  explicit Oracle(std::uint64_t budget = kDefaultEnumerationBudget) noexcept : budget_(budget) {}

  std::uint64_t budget() const noexcept { return budget_; }

  /// Size of the randomness space exact_rejection enumerates.
  static BigInt randomness_space_size(const Shape& shape, TestKind kind);
  bool can_enumerate(const Shape& shape, TestKind kind) const;
  bool can_find_nearest(const Shape& shape) const;

  ExactRejection exact_rejection(const BinaryTensor& f, TestKind kind) const;

  /// Global minimum over all 2^{1 + sum(n_i - 1)} canonical direct sums; ties
  /// go to the lexicographically smallest canonical string.
  NearestDirectSum nearest_direct_sum(const BinaryTensor& f) const;

  /// Minimum over all (S, c) for g on a binary cube; ties go to the smallest
  /// (c, S-mask).
  NearestAffine nearest_affine(const BinaryTensor& g) const;

 private:
  void charge(const BigInt& work, const char* what) const;

  std::uint64_t budget_;
};

/// Local view of f from anchor a: f_i(x) = f(a_x^i) for i < d, and
/// f_d(x) = f(a_x^d) (+) f(a) when d is even (no correction when d is odd).
DirectSum local_view_decode(const BinaryTensor& f, const Point& a);

struct AnchorDecode {
  Point anchor;
  DirectSum decoded;
  Rational distance;
};

/// Tries every anchor and keeps the closest local view (first anchor in
/// row-major order on ties).
AnchorDecode best_anchor_decode(const BinaryTensor& f, std::uint64_t budget = kDefaultEnumerationBudget);

struct ResidualSides {
  bool residual;  ///< (f - local_view_decode(f, a))(b)
  bool parity;    ///< xor of f over the Shapka multiset Q_{a,b}
};

ResidualSides shapka_residual_identity_check(const BinaryTensor& f, const Point& a, const Point& b);

/// Pr_b[Shapka rejects (a, b)] for a fixed anchor, exactly.
Rational shapka_anchor_rejection(const BinaryTensor& f, const Point& a);

/// Pr_{x ~ mu_{2/3}}[chi_S(x) = 0] = (1 + (-1/3)^{|S|}) / 2.
Rational biased_character_probability(std::size_t s_size);
/// The same probability by summing weighted assignments of an s-element
/// S inside F2^dimension (each bit 0 w.p. 1/3, 1 w.p. 2/3).
Rational biased_character_probability_enumerated(std::size_t s_size, std::size_t dimension);

}  // namespace rank1check
