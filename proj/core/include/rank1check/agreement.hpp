#pragma once

// Two-query direct-product tests T(alpha) and T(t) over
// g : [N_1] x ... x [N_k] -> [M]^k, plurality decoding, and the bridge that
// turns a tensor into the tuple-valued function F(b) = S(b) used to combine
// per-subcube affine fits.

#include "rank1check/core.hpp"
#include "rank1check/oracles.hpp"
#include "rank1check/rng.hpp"
#include "rank1check/testers.hpp"

#include <iosfwd>
#include <map>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>

namespace rank1check {

using Symbol = std::uint32_t;

class DPShape {
 public:
  DPShape(std::vector<std::size_t> sizes, std::size_t alphabet);

  std::size_t k() const noexcept { return domain_.rank(); }
  const std::vector<std::size_t>& sizes() const noexcept { return domain_.dims(); }
  std::size_t alphabet() const noexcept { return alphabet_; }
  /// The input domain prod [N_i], row-major.
  const Shape& domain() const noexcept { return domain_; }

  friend bool operator==(const DPShape& a, const DPShape& b) {
    return a.domain_ == b.domain_ && a.alphabet_ == b.alphabet_;
  }

 private:
  Shape domain_;
  std::size_t alphabet_;
};

class DPFunction {
 public:
  /// table[offset * k + i] = g(x)_i where offset is x's row-major offset.
  DPFunction(DPShape shape, std::vector<Symbol> table);

  static DPFunction direct_product(DPShape shape, const std::vector<std::vector<Symbol>>& components);

  const DPShape& dpshape() const noexcept { return shape_; }
  std::size_t k() const noexcept { return shape_.k(); }
  std::span<const Symbol> table() const noexcept { return table_; }
  std::span<const Symbol> value(std::size_t offset) const { return std::span(table_).subspan(offset * k(), k()); }
  Symbol at(std::size_t offset, std::size_t coord) const { return table_[offset * k() + coord]; }
  std::span<const Symbol> operator()(const Point& x) const { return value(shape_.domain().offset(x)); }

  DPFunction with_value(std::size_t offset, std::span<const Symbol> tuple) const;

  friend bool operator==(const DPFunction& a, const DPFunction& b) {
    return a.shape_ == b.shape_ && a.table_ == b.table_;
  }

 private:
  DPShape shape_;
  std::vector<Symbol> table_;
};

/// T(alpha) draw: A is the set of coordinates copied from x into y.
struct AlphaDraw {
  Point x, y;
  IndexSet a;
};

/// T(t) draw: y agrees with x on T, |T| = t.
struct FixedTDraw {
  Point x;
  IndexSet t;
  Point y;
};

using DPRandomness = std::variant<AlphaDraw, FixedTDraw>;

TrialOutcome dp_alpha_trial(const DPFunction& g, const AlphaDraw& r);
TrialOutcome dp_fixed_t_trial(const DPFunction& g, const FixedTDraw& r);
TrialOutcome run_dp_trial(const DPFunction& g, const DPRandomness& r);

AlphaDraw sample_alpha(const DPShape& shape, double alpha, Rng& rng);
FixedTDraw sample_fixed_t(const DPShape& shape, std::size_t t, Rng& rng);

inline Rational default_alpha() { return Rational(3, 4); }
/// max(1, floor(k / 5)), inside the k/10 < t < k/4 window for large k.
std::size_t default_fixed_t(std::size_t k) noexcept;

Rational exact_alpha_rejection(const DPFunction& g, const Rational& alpha,
                               std::uint64_t budget = kDefaultEnumerationBudget);
Rational exact_fixed_t_rejection(const DPFunction& g, std::size_t t, std::uint64_t budget = kDefaultEnumerationBudget);

struct PluralityDecode {
  std::vector<std::vector<Symbol>> components;
  Rational agreement;  ///< Pr_x[g(x) = (h_1(x_1), ..., h_k(x_k))]
};

/// h_i(v) = most frequent g(x)_i over x with x_i = v; ties go to the smallest symbol.
PluralityDecode dp_plurality_decode(const DPFunction& g);

/// F(b) = linear part of the nearest affine function to f o rho_{a,b}, with f
/// flipped first when f(a) = 1. Output has k = d, M = 2 and the tensor's shape.
DPFunction sic_to_dp_bridge(const BinaryTensor& f, const Point& a, std::uint64_t budget = kDefaultEnumerationBudget);

/// b uniform, then b'_i = b_i w.p. 3/4 and uniform on [n_i] \ {b_i} otherwise
/// (always b_i when n_i = 1).
std::pair<Point, Point> sample_bridge_pair(const Shape& shape, Rng& rng);
/// Exact law of (offset(b), offset(b')) under sample_bridge_pair.
std::map<std::pair<std::size_t, std::size_t>, Rational> bridge_pair_distribution(const Shape& shape);

struct SymmetryTest {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
};
/// Bowker's chi-square test that counts[(u, v)] and counts[(v, u)] share a law.
SymmetryTest symmetry_chi_square(const std::map<std::pair<std::size_t, std::size_t>, std::uint64_t>& counts);

/// Law of (offset(y), offset(y'), A cap A') when x is drawn once and two
/// T(alpha) partners y, y' are drawn independently from it.
using AlphaPairLaw = std::map<std::tuple<std::size_t, std::size_t, std::uint64_t>, Rational>;
AlphaPairLaw chained_alpha_pair_law(const DPShape& shape, const Rational& alpha);
/// Law of (offset(x), offset(y), A) for a single T(beta) draw.
AlphaPairLaw direct_alpha_pair_law(const DPShape& shape, const Rational& beta);

// DPFunction text format: "dpshape k M N1 ... Nk", then prod N_i lines of k
// space-separated symbols in row-major point order, every line '\n'-terminated.
void write_dp_function(std::ostream& os, const DPFunction& g);
std::string format_dp_function(const DPFunction& g);
DPFunction parse_dp_function(std::string_view text);
DPFunction read_dp_function(std::istream& is);

}  // namespace rank1check
