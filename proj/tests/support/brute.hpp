#pragma once

// Slow reference implementations for the test suite. They evaluate the test
// definitions point by point and enumerate every candidate explicitly, sharing
// no enumeration code with the library.

#include "rank1check/agreement.hpp"
#include "rank1check/core.hpp"
#include "rank1check/rational.hpp"
#include "rank1check/testers.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace brute {

using rank1check::BinaryTensor;
using rank1check::BigInt;
using rank1check::Coordinate;
using rank1check::Point;
using rank1check::Rational;
using rank1check::Shape;
using rank1check::TestKind;

inline std::vector<Point> all_points(const std::vector<std::size_t>& dims) {
  std::vector<Point> out;
  std::vector<Coordinate> c(dims.size(), 0);
  while (true) {
    out.emplace_back(std::span<const Coordinate>(c));
    std::size_t i = dims.size();
    while (i > 0) {
      --i;
      if (++c[i] < dims[i]) break;
      c[i] = 0;
      if (i == 0) return out;
    }
    if (dims.empty()) return out;
  }
}

inline std::vector<Point> all_points(const Shape& shape) { return all_points(shape.dims()); }

/// Coordinates from b on the axes in `mask`, from a elsewhere.
inline Point mix(const Point& a, const Point& b, std::uint64_t mask) {
  std::vector<Coordinate> c(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) c[i] = (mask >> i) & 1 ? b[i] : a[i];
  return Point(std::span<const Coordinate>(c));
}

inline std::uint64_t differ_mask(const Point& a, const Point& b) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (a[i] != b[i]) m |= std::uint64_t{1} << i;
  }
  return m;
}

/// Every submask of m, including 0 and m.
inline std::vector<std::uint64_t> submasks(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  std::uint64_t s = m;
  while (true) {
    out.push_back(s);
    if (s == 0) break;
    s = (s - 1) & m;
  }
  return out;
}

inline bool parity4(const BinaryTensor& f, const Point& p, const Point& q, const Point& r, const Point& s) {
  return f(p) ^ f(q) ^ f(r) ^ f(s);
}

/// Exact rejection probability straight from the test definitions.
inline Rational rejection(const BinaryTensor& f, TestKind kind) {
  const Shape& shape = f.shape();
  const std::size_t d = shape.rank();
  const std::uint64_t full = d == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1;
  const auto points = all_points(shape);
  const Rational pair_weight(BigInt(1), BigInt(points.size()) * BigInt(points.size()));
  Rational total(0);
  if (kind == TestKind::kBlr) {
    const Point zero = points.front();
    // On the binary cube x (+) y is the coordinatewise xor.
    for (const auto& x : points) {
      for (const auto& y : points) {
        std::vector<Coordinate> c(d);
        for (std::size_t i = 0; i < d; ++i) c[i] = x[i] ^ y[i];
        if (parity4(f, zero, x, y, Point(std::span<const Coordinate>(c)))) total += pair_weight;
      }
    }
    return total;
  }
  for (const auto& a : points) {
    for (const auto& b : points) {
      const std::uint64_t cube = differ_mask(a, b);
      switch (kind) {
        case TestKind::kSicSubsets: {
          const Rational w = pair_weight / Rational(BigInt(1) << (2 * d));
          for (std::uint64_t s = 0; s <= full; ++s) {
            for (std::uint64_t t = 0; t <= full; ++t) {
              if (parity4(f, a, mix(a, b, s), mix(a, b, t), mix(a, b, s ^ t))) total += w;
            }
          }
          break;
        }
        case TestKind::kSicCube: {
          const auto xs = submasks(cube);
          const Rational w = pair_weight / Rational(BigInt(xs.size()) * BigInt(xs.size()));
          for (auto x : xs) {
            for (auto y : xs) {
              if (parity4(f, a, mix(a, b, x), mix(a, b, y), mix(a, b, x ^ y))) total += w;
            }
          }
          break;
        }
        case TestKind::kShapka: {
          bool p = f(b);
          for (std::size_t j = 0; j < d; ++j) p ^= f(mix(a, b, std::uint64_t{1} << j));
          if (d % 2 == 0) p ^= f(a);
          if (p) total += pair_weight;
          break;
        }
        case TestKind::kConjectured: {
          const auto xs = submasks(cube);
          const Rational w = pair_weight / Rational(BigInt(xs.size()));
          for (auto x : xs) {
            if (parity4(f, a, mix(a, b, x), b, mix(a, b, x ^ cube))) total += w;
          }
          break;
        }
        default:
          break;
      }
    }
  }
  return total;
}

using Components = std::vector<std::vector<std::uint8_t>>;

/// Every tuple of component functions, canonical or not (2^{sum n_i} of them).
inline std::vector<Components> all_component_tuples(const Shape& shape) {
  std::size_t bits = 0;
  for (auto n : shape.dims()) bits += n;
  std::vector<Components> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    Components c(shape.rank());
    std::size_t used = 0;
    for (std::size_t i = 0; i < shape.rank(); ++i) {
      c[i].resize(shape.dim(i));
      for (auto& v : c[i]) v = (code >> used++) & 1;
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline bool eval(const Components& c, const Point& p) {
  bool v = false;
  for (std::size_t i = 0; i < c.size(); ++i) v ^= c[i][p[i]] != 0;
  return v;
}

inline std::size_t mismatches(const BinaryTensor& f, const Components& c) {
  std::size_t m = 0;
  for (const auto& p : all_points(f.shape())) m += f(p) != eval(c, p) ? 1 : 0;
  return m;
}

inline Rational nearest_direct_sum_distance(const BinaryTensor& f) {
  std::size_t best = f.size();
  for (const auto& c : all_component_tuples(f.shape())) best = std::min(best, mismatches(f, c));
  return Rational(BigInt(best), BigInt(f.size()));
}

inline bool is_direct_sum(const BinaryTensor& f) { return nearest_direct_sum_distance(f) == 0; }

inline Rational nearest_affine_distance(const BinaryTensor& g) {
  const std::size_t d = g.shape().rank();
  std::size_t best = g.size();
  for (int c = 0; c < 2; ++c) {
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << d); ++s) {
      std::size_t m = 0;
      for (const auto& p : all_points(g.shape())) {
        bool v = c != 0;
        for (std::size_t i = 0; i < d; ++i) {
          if ((s >> i) & 1) v ^= p[i] != 0;
        }
        m += v != g(p) ? 1 : 0;
      }
      best = std::min(best, m);
    }
  }
  return Rational(BigInt(best), BigInt(g.size()));
}

/// Every tensor of a shape with at most 20 entries.
inline std::vector<BinaryTensor> all_tensors(const Shape& shape) {
  std::vector<BinaryTensor> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << shape.size()); ++code) {
    out.push_back(BinaryTensor::from_code(shape, code));
  }
  return out;
}

// Direct-product references ---------------------------------------------------

inline bool agree(const rank1check::DPFunction& g, const Point& x, const Point& y, std::uint64_t mask) {
  const auto gx = g(x);
  const auto gy = g(y);
  for (std::size_t i = 0; i < g.k(); ++i) {
    if ((mask >> i) & 1 && gx[i] != gy[i]) return false;
  }
  return true;
}

/// Pr[T(alpha) rejects], weighting each (x, y, A) explicitly.
inline Rational alpha_rejection(const rank1check::DPFunction& g, const Rational& alpha) {
  const Shape& dom = g.dpshape().domain();
  const std::size_t k = g.k();
  const auto points = all_points(dom);
  Rational total(0);
  for (const auto& x : points) {
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a) {
      for (const auto& y : points) {
        Rational w(BigInt(1), BigInt(points.size()));
        bool possible = true;
        for (std::size_t i = 0; i < k; ++i) {
          if ((a >> i) & 1) {
            if (y[i] != x[i]) possible = false;
            w *= alpha;
          } else {
            w *= (1 - alpha) / Rational(BigInt(dom.dim(i)));
          }
        }
        if (possible && !agree(g, x, y, a)) total += w;
      }
    }
  }
  return total;
}

inline Rational fixed_t_rejection(const rank1check::DPFunction& g, std::size_t t) {
  const Shape& dom = g.dpshape().domain();
  const std::size_t k = g.k();
  const auto points = all_points(dom);
  std::vector<std::uint64_t> subsets;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
    if (static_cast<std::size_t>(std::popcount(m)) == t) subsets.push_back(m);
  }
  Rational total(0);
  for (const auto& x : points) {
    for (auto m : subsets) {
      std::vector<Point> ys;
      for (const auto& y : points) {
        if ((differ_mask(x, y) & m) == 0) ys.push_back(y);
      }
      for (const auto& y : ys) {
        if (!agree(g, x, y, m)) {
          total += Rational(BigInt(1), BigInt(points.size()) * BigInt(subsets.size()) * BigInt(ys.size()));
        }
      }
    }
  }
  return total;
}

}  // namespace brute
