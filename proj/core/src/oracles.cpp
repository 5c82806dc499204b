#include "rank1check/oracles.hpp"

#include <bit>
#include <cstddef>

namespace rank1check {

namespace {

// Offsets and coordinates of every point of a shape, for tight enumeration.
struct DomainTable {
  explicit DomainTable(const Shape& s) : shape(s), rank(s.rank()), coords(s.size() * s.rank()) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      std::size_t rem = j;
      for (std::size_t i = 0; i < rank; ++i) {
        coords[j * rank + i] = static_cast<Coordinate>(rem / s.stride(i));
        rem %= s.stride(i);
      }
    }
  }

  Coordinate coord(std::size_t point, std::size_t axis) const { return coords[point * rank + axis]; }

  std::uint64_t delta_mask(std::size_t a, std::size_t b) const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < rank; ++i) {
      if (coord(a, i) != coord(b, i)) m |= std::uint64_t{1} << i;
    }
    return m;
  }

  // out[m] = offset of a with the axes of `axes` selected by local mask m
  // taken from b. Local bit r is the r-th axis of `axes`.
  void take_table(std::size_t a, std::size_t b, std::uint64_t axes, std::vector<std::ptrdiff_t>& out) const {
    const std::size_t k = static_cast<std::size_t>(std::popcount(axes));
    out.resize(std::size_t{1} << k);
    std::ptrdiff_t diffs[64];
    std::size_t r = 0;
    for (std::uint64_t m = axes; m; m &= m - 1, ++r) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      diffs[r] = (static_cast<std::ptrdiff_t>(coord(b, i)) - static_cast<std::ptrdiff_t>(coord(a, i))) *
                 static_cast<std::ptrdiff_t>(shape.stride(i));
    }
    out[0] = static_cast<std::ptrdiff_t>(a);
    for (std::size_t m = 1; m < out.size(); ++m) {
      const auto low = static_cast<std::size_t>(std::countr_zero(m));
      out[m] = out[m & (m - 1)] + diffs[low];
    }
  }

  const Shape& shape;
  std::size_t rank;
  std::vector<Coordinate> coords;
};

std::vector<std::uint8_t> unpack(const BinaryTensor& f) {
  std::vector<std::uint8_t> bits(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) bits[j] = f.bit(j);
  return bits;
}

// Number of (x, y) in the cube with t[0] + t[x] + t[y] + t[x^y] = 1.
std::uint64_t blr_rejections(const std::uint8_t* t, std::size_t n) {
  std::uint64_t count = 0;
  const std::uint8_t t0 = t[0];
  for (std::size_t x = 0; x < n; ++x) {
    const std::uint8_t tx = t0 ^ t[x];
    for (std::size_t y = 0; y < n; ++y) count += tx ^ t[y] ^ t[x ^ y];
  }
  return count;
}

BigInt pow2(std::size_t e) { return BigInt(1) << static_cast<unsigned>(e); }

std::size_t reverse_bits(std::size_t v, std::size_t width) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < width; ++i) r |= ((v >> i) & 1U) << (width - 1 - i);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- affine

bool AffineFunction::operator()(const Point& x) const {
  bool v = constant;
  for (std::size_t i = 0; i < x.rank(); ++i) {
    if (support.contains(i)) v ^= (x[i] & 1U) != 0;
  }
  return v;
}

BinaryTensor AffineFunction::materialize(const Shape& cube) const {
  if (!cube.is_binary_cube()) throw ShapeMismatch("affine functions live on binary cubes");
  if (!support.within(cube.rank())) throw ShapeMismatch("affine support exceeds cube dimension");
  const std::size_t dim = cube.rank();
  return BinaryTensor::generate(cube, [&](std::size_t j) {
    const auto x = reverse_bits(j, dim);  // bit i is axis i
    return constant ^ ((std::popcount(x & support.mask()) & 1) != 0);
  });
}

CubeAffineFit nearest_affine_on_cube(std::span<const std::uint8_t> table) {
  const std::size_t n = table.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("cube table length must be a power of two");
  CubeAffineFit best{0, false, n + 1};
  for (int c = 0; c < 2; ++c) {
    for (std::uint64_t s = 0; s < n; ++s) {
      std::uint64_t mismatches = 0;
      for (std::uint64_t x = 0; x < n; ++x) {
        const bool value = (c != 0) ^ ((std::popcount(s & x) & 1) != 0);
        mismatches += (table[x] != 0) != value;
      }
      if (mismatches < best.mismatches) best = {s, c != 0, mismatches};
    }
  }
  return best;
}

// ---------------------------------------------------------------- Oracle

BigInt Oracle::randomness_space_size(const Shape& shape, TestKind kind) {
  const BigInt pairs = BigInt(shape.size()) * BigInt(shape.size());
  switch (kind) {
    case TestKind::kSicSubsets:
    case TestKind::kSicCube: return pairs * pow2(2 * shape.rank());
    case TestKind::kShapka: return pairs;
    case TestKind::kBlr: return pairs;  // 2^D * 2^D pairs (x, y)
    case TestKind::kConjectured: return pairs * pow2(shape.rank());
  }
  return pairs;
}

bool Oracle::can_enumerate(const Shape& shape, TestKind kind) const {
  if (kind == TestKind::kBlr && !shape.is_binary_cube()) return false;
  return randomness_space_size(shape, kind) <= BigInt(budget_);
}

bool Oracle::can_find_nearest(const Shape& shape) const {
  const std::size_t m = DirectSum::free_bits(shape);
  return m <= 63 && pow2(m) * BigInt(shape.size()) <= BigInt(budget_);
}

void Oracle::charge(const BigInt& work, const char* what) const {
  if (work > BigInt(budget_)) {
    throw BudgetExceeded(std::string(what) + " needs " + work.str() + " steps, budget is " + std::to_string(budget_));
  }
}

ExactRejection Oracle::exact_rejection(const BinaryTensor& f, TestKind kind) const {
  const Shape& shape = f.shape();
  if (kind == TestKind::kBlr && !shape.is_binary_cube()) {
    throw ShapeMismatch("BLR needs a function on a binary cube, got " + shape.to_string());
  }
  const BigInt total = randomness_space_size(shape, kind);
  charge(total, "exact rejection enumeration");

  const std::vector<std::uint8_t> bits = unpack(f);
  const std::size_t points = shape.size();
  const std::size_t d = shape.rank();
  std::uint64_t rejecting = 0;

  if (kind == TestKind::kBlr) {
    rejecting = blr_rejections(bits.data(), points);
    return {BigInt(rejecting), total};
  }

  const DomainTable dom(shape);
  const std::uint64_t all_axes = IndexSet::full(d).mask();
  std::vector<std::ptrdiff_t> take;
  std::vector<std::uint8_t> local;

  for (std::size_t a = 0; a < points; ++a) {
    for (std::size_t b = 0; b < points; ++b) {
      switch (kind) {
        case TestKind::kSicSubsets: {
          // Enumerate (S, T) over all 2^d subsets, off-delta axes included.
          dom.take_table(a, b, all_axes, take);
          const std::size_t n = take.size();
          const std::uint8_t fa = bits[a];
          for (std::size_t s = 0; s < n; ++s) {
            const std::uint8_t fs = fa ^ bits[static_cast<std::size_t>(take[s])];
            for (std::size_t t = 0; t < n; ++t) {
              rejecting += fs ^ bits[static_cast<std::size_t>(take[t])] ^ bits[static_cast<std::size_t>(take[s ^ t])];
            }
          }
          break;
        }
        case TestKind::kSicCube: {
          const std::uint64_t cube = dom.delta_mask(a, b);
          dom.take_table(a, b, cube, take);
          local.resize(take.size());
          for (std::size_t x = 0; x < take.size(); ++x) local[x] = bits[static_cast<std::size_t>(take[x])];
          const std::size_t k = static_cast<std::size_t>(std::popcount(cube));
          rejecting += blr_rejections(local.data(), local.size()) << (2 * (d - k));
          break;
        }
        case TestKind::kShapka: {
          std::uint8_t parity = bits[b];
          const std::ptrdiff_t off_a = static_cast<std::ptrdiff_t>(a);
          for (std::size_t j = 0; j < d; ++j) {
            const std::ptrdiff_t step =
                (static_cast<std::ptrdiff_t>(dom.coord(b, j)) - static_cast<std::ptrdiff_t>(dom.coord(a, j))) *
                static_cast<std::ptrdiff_t>(shape.stride(j));
            parity ^= bits[static_cast<std::size_t>(off_a + step)];
          }
          if (d % 2 == 0) parity ^= bits[a];
          rejecting += parity;
          break;
        }
        case TestKind::kConjectured: {
          const std::uint64_t cube = dom.delta_mask(a, b);
          dom.take_table(a, b, cube, take);
          const std::size_t n = take.size();
          const std::size_t ones = n - 1;
          std::uint64_t count = 0;
          const std::uint8_t corners = bits[static_cast<std::size_t>(take[0])] ^ bits[static_cast<std::size_t>(take[ones])];
          for (std::size_t x = 0; x < n; ++x) {
            count += corners ^ bits[static_cast<std::size_t>(take[x])] ^ bits[static_cast<std::size_t>(take[x ^ ones])];
          }
          const std::size_t k = static_cast<std::size_t>(std::popcount(cube));
          rejecting += count << (d - k);
          break;
        }
        case TestKind::kBlr: break;
      }
    }
  }
  return {BigInt(rejecting), total};
}

NearestDirectSum Oracle::nearest_direct_sum(const BinaryTensor& f) const {
  const Shape& shape = f.shape();
  const std::size_t m = DirectSum::free_bits(shape);
  if (m > 63) throw BudgetExceeded("too many canonical direct sums");
  charge(pow2(m) * BigInt(shape.size()), "nearest direct sum enumeration");

  // basis[p] is the tensor contributed by free bit p (most significant first):
  // the indicator of {a : a_axis = x}.
  const std::size_t words = f.words().size();
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t i = 0; i < shape.rank(); ++i) {
    for (std::size_t x = (i == 0 ? 0 : 1); x < shape.dim(i); ++x) {
      const BinaryTensor slab = BinaryTensor::generate(shape, [&](std::size_t j) {
        return (j / shape.stride(i)) % shape.dim(i) == x;
      });
      basis.emplace_back(slab.words().begin(), slab.words().end());
    }
  }

  const auto target = f.words();
  std::vector<std::uint64_t> cand(words, 0);
  std::uint64_t best_code = 0;
  std::size_t best_dist = f.size() + 1;
  const std::uint64_t count = std::uint64_t{1} << m;
  std::uint64_t gray = 0;
  for (std::uint64_t step = 0; step < count; ++step) {
    if (step > 0) {
      // Gray-code walk: flip the free bit at position countr_zero(step).
      const auto bit = static_cast<std::size_t>(std::countr_zero(step));
      gray ^= std::uint64_t{1} << bit;
      const auto& v = basis[m - 1 - bit];
      for (std::size_t w = 0; w < words; ++w) cand[w] ^= v[w];
    }
    std::size_t dist = 0;
    for (std::size_t w = 0; w < words; ++w) dist += static_cast<std::size_t>(std::popcount(cand[w] ^ target[w]));
    if (dist < best_dist || (dist == best_dist && gray < best_code)) {
      best_dist = dist;
      best_code = gray;
    }
  }
  return {DirectSum::from_code(shape, best_code), Rational(BigInt(best_dist), BigInt(f.size()))};
}

NearestAffine Oracle::nearest_affine(const BinaryTensor& g) const {
  const Shape& shape = g.shape();
  if (!shape.is_binary_cube()) throw ShapeMismatch("nearest_affine needs a binary cube, got " + shape.to_string());
  const std::size_t dim = shape.rank();
  charge(BigInt(2) * BigInt(shape.size()) * BigInt(shape.size()), "nearest affine enumeration");
  // Local indexing wants bit i = axis i; tensor offsets have axis 0 as the
  // most significant bit.
  std::vector<std::uint8_t> table(shape.size());
  for (std::size_t x = 0; x < table.size(); ++x) table[x] = g.bit(reverse_bits(x, dim));
  const CubeAffineFit fit = nearest_affine_on_cube(table);
  return {AffineFunction{IndexSet(fit.support), fit.constant},
          Rational(BigInt(fit.mismatches), BigInt(shape.size()))};
}

// ---------------------------------------------------------------- local views

DirectSum local_view_decode(const BinaryTensor& f, const Point& a) {
  const Shape& shape = f.shape();
  const std::size_t base = shape.offset(a);
  const std::size_t d = shape.rank();
  const bool fa = f.bit(base);
  std::vector<DirectSum::Component> comps;
  for (std::size_t i = 0; i < d; ++i) {
    DirectSum::Component c(shape.dim(i));
    const std::size_t without = base - a[i] * shape.stride(i);
    for (std::size_t x = 0; x < c.size(); ++x) {
      bool v = f.bit(without + x * shape.stride(i));
      if (i == d - 1 && d % 2 == 0) v ^= fa;
      c[x] = v;
    }
    comps.push_back(std::move(c));
  }
  return DirectSum(shape, std::move(comps));
}

AnchorDecode best_anchor_decode(const BinaryTensor& f, std::uint64_t budget) {
  const Shape& shape = f.shape();
  if (BigInt(shape.size()) * BigInt(shape.size()) > BigInt(budget)) {
    throw BudgetExceeded("best-anchor decode needs |X|^2 = " + (BigInt(shape.size()) * BigInt(shape.size())).str() +
                         " steps");
  }
  std::optional<AnchorDecode> best;
  std::size_t best_dist = 0;
  for (std::size_t j = 0; j < shape.size(); ++j) {
    Point a = shape.point_at(j);
    DirectSum ds = local_view_decode(f, a);
    const std::size_t dist = hamming_distance(f, materialize(ds));
    if (!best || dist < best_dist) {
      best_dist = dist;
      best = AnchorDecode{std::move(a), std::move(ds), Rational(BigInt(dist), BigInt(shape.size()))};
    }
  }
  return *best;
}

ResidualSides shapka_residual_identity_check(const BinaryTensor& f, const Point& a, const Point& b) {
  const DirectSum view = local_view_decode(f, a);
  const bool residual = f(b) ^ eval_direct_sum(view, b);
  bool parity = false;
  for (const Point& q : shapka_queries(a, b)) parity ^= f(q);
  return {residual, parity};
}

Rational shapka_anchor_rejection(const BinaryTensor& f, const Point& a) {
  const Shape& shape = f.shape();
  std::size_t rejecting = 0;
  for (std::size_t j = 0; j < shape.size(); ++j) {
    rejecting += !trial_accepts(f, ShapkaDraw{a, shape.point_at(j)});
  }
  return Rational(BigInt(rejecting), BigInt(shape.size()));
}

// ---------------------------------------------------------------- biased characters

Rational biased_character_probability(std::size_t s_size) {
  Rational bias(1);
  for (std::size_t i = 0; i < s_size; ++i) bias *= Rational(-1, 3);
  return (Rational(1) + bias) / 2;
}

Rational biased_character_probability_enumerated(std::size_t s_size, std::size_t dimension) {
  if (s_size > dimension) throw std::invalid_argument("|S| exceeds the cube dimension");
  if (dimension > 24) throw BudgetExceeded("biased character enumeration limited to 24 dimensions");
  const Rational zero_weight(1, 3);
  const Rational one_weight(2, 3);
  const std::uint64_t s_mask = (std::uint64_t{1} << s_size) - 1;
  Rational total(0);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << dimension); ++x) {
    if (std::popcount(x & s_mask) % 2 != 0) continue;
    Rational w(1);
    for (std::size_t i = 0; i < dimension; ++i) w *= ((x >> i) & 1U) ? one_weight : zero_weight;
    total += w;
  }
  return total;
}

}  // namespace rank1check
