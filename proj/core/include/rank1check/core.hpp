#pragma once

// Domains [n1] x ... x [nd], points, index sets, binary subcubes, dense F2
// tensors and direct sums. Axes are 0-based throughout: IndexSet bit i is
// axis i, and coordinate values on axis i range over {0, ..., n_i - 1}.

#include "rank1check/errors.hpp"
#include "rank1check/rational.hpp"

#include <boost/container/small_vector.hpp>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rank1check {

inline constexpr std::size_t kMaxRank = 64;
inline constexpr std::size_t kMaxTensorSize = std::size_t{1} << 36;

using Coordinate = std::uint32_t;

class Point {
 public:
  using Storage = boost::container::small_vector<Coordinate, 8>;

  Point() = default;
  Point(std::initializer_list<Coordinate> coords) : coords_(coords) {}
  explicit Point(Storage coords) : coords_(std::move(coords)) {}
  explicit Point(std::span<const Coordinate> coords) : coords_(coords.begin(), coords.end()) {}

  /// Parses "0,1,2" (also accepts 'x' separators).
  static Point parse(std::string_view text);

  std::size_t rank() const noexcept { return coords_.size(); }
  Coordinate operator[](std::size_t axis) const { return coords_[axis]; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }
  const Storage& coords() const noexcept { return coords_; }

  Point with_coord(std::size_t axis, Coordinate value) const;

  std::string to_string() const;

  friend bool operator==(const Point&, const Point&) = default;

 private:
  Storage coords_;
};

std::ostream& operator<<(std::ostream& os, const Point& p);

/// Rectangular domain [n1] x ... x [nd]; row-major with the last axis fastest.
class Shape {
 public:
  explicit Shape(std::vector<std::size_t> dims);

  /// Parses "2,2,2" or "2x2x2".
  static Shape parse(std::string_view text);
  static Shape binary_cube(std::size_t dimension);

  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t stride(std::size_t axis) const { return strides_.at(axis); }
  const std::vector<std::size_t>& strides() const noexcept { return strides_; }
  bool is_binary_cube() const noexcept;

  bool contains(const Point& p) const noexcept;
  /// Throws ShapeMismatch if p is not a point of this domain.
  std::size_t offset(const Point& p) const;
  Point point_at(std::size_t offset) const;

  /// "2x2x2"
  std::string to_string() const;

  friend bool operator==(const Shape& a, const Shape& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// A subset of the axes {0, ..., d-1} stored as a bit mask.
class IndexSet {
 public:
  constexpr IndexSet() = default;
  constexpr explicit IndexSet(std::uint64_t mask) : mask_(mask) {}

  static IndexSet full(std::size_t rank);
  static IndexSet of(std::initializer_list<std::size_t> axes);

  constexpr std::uint64_t mask() const noexcept { return mask_; }
  constexpr bool contains(std::size_t axis) const noexcept {
    return axis < 64 && ((mask_ >> axis) & 1U) != 0;
  }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  /// True when every member is a valid axis of a rank-d domain.
  bool within(std::size_t rank) const noexcept;
  constexpr bool subset_of(IndexSet other) const noexcept { return (mask_ & ~other.mask_) == 0; }

  IndexSet with(std::size_t axis) const;
  std::vector<std::size_t> elements() const;

  friend constexpr IndexSet operator^(IndexSet a, IndexSet b) noexcept { return IndexSet(a.mask_ ^ b.mask_); }
  friend constexpr IndexSet operator&(IndexSet a, IndexSet b) noexcept { return IndexSet(a.mask_ & b.mask_); }
  friend constexpr IndexSet operator|(IndexSet a, IndexSet b) noexcept { return IndexSet(a.mask_ | b.mask_); }
  friend constexpr bool operator==(IndexSet, IndexSet) = default;

  std::string to_string() const;

 private:
  std::uint64_t mask_ = 0;
};

/// A point of the binary cube F2^mask: one bit per axis in the mask.
class CubePoint {
 public:
  /// `ones` is the set of axes assigned 1; it must be a subset of `mask`.
  CubePoint(IndexSet mask, IndexSet ones);

  static CubePoint zero(IndexSet mask) { return CubePoint(mask, IndexSet{}); }
  static CubePoint all_ones(IndexSet mask) { return CubePoint(mask, mask); }
  /// Bit r of `local` assigns the r-th smallest axis of `mask`.
  static CubePoint from_local(IndexSet mask, std::uint64_t local);

  IndexSet mask() const noexcept { return mask_; }
  IndexSet ones() const noexcept { return ones_; }
  std::size_t dimension() const noexcept { return mask_.size(); }
  bool bit(std::size_t axis) const;
  std::uint64_t local_index() const noexcept;

  /// Coordinatewise xor; masks must agree.
  CubePoint operator^(const CubePoint& other) const;

  friend bool operator==(const CubePoint&, const CubePoint&) = default;

 private:
  IndexSet mask_;
  IndexSet ones_;
};

/// Dense f : [n1] x ... x [nd] -> F2, packed 64 entries per word in
/// row-major order.
class BinaryTensor {
 public:
  /// The all-zero tensor.
  explicit BinaryTensor(Shape shape);

  static BinaryTensor from_bits(Shape shape, std::span<const std::uint8_t> bits);
  /// Entry at offset j is bit j of `code`; requires size <= 64.
  static BinaryTensor from_code(Shape shape, std::uint64_t code);
  static BinaryTensor from_bit_string(Shape shape, std::string_view bits);

  template <class Fn>
  static BinaryTensor generate(Shape shape, Fn&& entry_at_offset) {
    BinaryTensor t(std::move(shape));
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (entry_at_offset(j)) t.words_[j >> 6] |= std::uint64_t{1} << (j & 63);
    }
    return t;
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return shape_.size(); }

  bool bit(std::size_t offset) const noexcept { return ((words_[offset >> 6] >> (offset & 63)) & 1U) != 0; }
  bool operator()(const Point& p) const { return bit(shape_.offset(p)); }
  /// Only valid when size() <= 64.
  std::uint64_t code() const;

  std::size_t count_ones() const noexcept;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  BinaryTensor with_flipped(std::size_t offset) const;
  BinaryTensor operator^(const BinaryTensor& other) const;

  std::string to_bit_string() const;

  friend bool operator==(const BinaryTensor& a, const BinaryTensor& b) {
    return a.shape_ == b.shape_ && a.words_ == b.words_;
  }

 private:
  Shape shape_;
  std::vector<std::uint64_t> words_;
};

/// f1 (+) ... (+) fd kept in canonical form: every component after the first
/// is 0 at coordinate 0, so equal functions have identical components.
class DirectSum {
 public:
  using Component = std::vector<std::uint8_t>;

  DirectSum(Shape shape, std::vector<Component> components);

  static DirectSum zero(Shape shape);
  /// Number of free bits of a canonical form, 1 + sum(n_i - 1).
  static std::size_t free_bits(const Shape& shape) noexcept;
  /// The canonical direct sums of a shape, indexed so that increasing `code`
  /// is increasing lexicographic order of canonical_string().
  static DirectSum from_code(const Shape& shape, std::uint64_t code);

  const Shape& shape() const noexcept { return shape_; }
  const std::vector<Component>& components() const noexcept { return components_; }
  bool value(std::size_t axis, Coordinate x) const { return components_.at(axis).at(x) != 0; }

  bool operator()(const Point& a) const;

  /// Components concatenated as a 0/1 string, axis 0 first.
  std::string canonical_string() const;

  friend bool operator==(const DirectSum& a, const DirectSum& b) {
    return a.shape_ == b.shape_ && a.components_ == b.components_;
  }

 private:
  Shape shape_;
  std::vector<Component> components_;
};

IndexSet delta(const Point& a, const Point& b);
/// a_S b: coordinate i is a_i for i in S and b_i otherwise.
Point splice(const Point& a, const Point& b, IndexSet s);
/// rho_{a,b}(x): b_i where x_i = 1, a_i elsewhere. x.mask() must equal delta(a, b).
Point project(const Point& a, const Point& b, const CubePoint& x);

bool eval_direct_sum(const DirectSum& ds, const Point& a);
BinaryTensor materialize(const DirectSum& ds);
/// The canonical decomposition of f, or nullopt when f is not a direct sum.
std::optional<DirectSum> as_direct_sum(const BinaryTensor& f);

std::size_t hamming_distance(const BinaryTensor& f, const BinaryTensor& g);
Rational distance(const BinaryTensor& f, const BinaryTensor& g);

using Permutation = std::vector<Coordinate>;
/// f^{pi}(x1, ..., xd) = f(pi_1(x1), ..., pi_d(xd)).
BinaryTensor reindex(const BinaryTensor& f, std::span<const Permutation> perms);
/// f (+) 1.
BinaryTensor flip(const BinaryTensor& f);

}  // namespace rank1check
