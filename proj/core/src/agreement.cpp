#include "rank1check/agreement.hpp"

#include "rank1check/tensor_io.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <charconv>
#include <set>
#include <istream>
#include <ostream>

namespace rank1check {

namespace {

void require_point(const Shape& domain, const Point& p) {
  if (!domain.contains(p)) throw std::invalid_argument("point " + p.to_string() + " outside " + domain.to_string());
}

bool agree_on(const DPFunction& g, std::size_t x, std::size_t y, IndexSet coords) {
  for (auto i : coords.elements()) {
    if (g.at(x, i) != g.at(y, i)) return false;
  }
  return true;
}

bool consistent(const Shape& dom, std::size_t x, std::size_t y, std::uint64_t coords) {
  for (std::uint64_t m = coords; m; m &= m - 1) {
    const auto i = static_cast<std::size_t>(std::countr_zero(m));
    if ((x / dom.stride(i)) % dom.dim(i) != (y / dom.stride(i)) % dom.dim(i)) return false;
  }
  return true;
}

// prod_{i not in coords} N_i
BigInt free_volume(const Shape& dom, std::uint64_t coords) {
  BigInt v = 1;
  for (std::size_t i = 0; i < dom.rank(); ++i) {
    if (((coords >> i) & 1U) == 0) v *= dom.dim(i);
  }
  return v;
}

Rational subset_weight(const Rational& p, std::size_t k, std::uint64_t coords) {
  Rational w(1);
  for (std::size_t i = 0; i < k; ++i) w *= ((coords >> i) & 1U) ? p : Rational(1) - p;
  return w;
}

void charge(const BigInt& work, std::uint64_t budget, const char* what) {
  if (work > BigInt(budget)) {
    throw BudgetExceeded(std::string(what) + " needs " + work.str() + " steps, budget is " + std::to_string(budget));
  }
}

BigInt binomial(std::size_t n, std::size_t r) {
  BigInt c = 1;
  for (std::size_t i = 0; i < r; ++i) c = c * (n - i) / (i + 1);
  return c;
}

}  // namespace

// ---------------------------------------------------------------- types

DPShape::DPShape(std::vector<std::size_t> sizes, std::size_t alphabet) : domain_(std::move(sizes)), alphabet_(alphabet) {
  if (alphabet_ == 0) throw std::invalid_argument("alphabet size must be positive");
}

DPFunction::DPFunction(DPShape shape, std::vector<Symbol> table) : shape_(std::move(shape)), table_(std::move(table)) {
  if (table_.size() != shape_.domain().size() * shape_.k()) {
    throw ShapeMismatch("DP table has " + std::to_string(table_.size()) + " symbols, expected " +
                        std::to_string(shape_.domain().size() * shape_.k()));
  }
  for (auto s : table_) {
    if (s >= shape_.alphabet()) throw std::invalid_argument("DP symbol " + std::to_string(s) + " outside alphabet");
  }
}

DPFunction DPFunction::direct_product(DPShape shape, const std::vector<std::vector<Symbol>>& components) {
  if (components.size() != shape.k()) throw ShapeMismatch("direct product needs k components");
  const Shape& dom = shape.domain();
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].size() != dom.dim(i)) throw ShapeMismatch("component length differs from N_i");
  }
  std::vector<Symbol> table(dom.size() * shape.k());
  for (std::size_t x = 0; x < dom.size(); ++x) {
    for (std::size_t i = 0; i < shape.k(); ++i) table[x * shape.k() + i] = components[i][(x / dom.stride(i)) % dom.dim(i)];
  }
  return DPFunction(std::move(shape), std::move(table));
}

DPFunction DPFunction::with_value(std::size_t offset, std::span<const Symbol> tuple) const {
  if (tuple.size() != k()) throw ShapeMismatch("tuple length differs from k");
  std::vector<Symbol> t = table_;
  std::copy(tuple.begin(), tuple.end(), t.begin() + static_cast<std::ptrdiff_t>(offset * k()));
  return DPFunction(shape_, std::move(t));
}

// ---------------------------------------------------------------- trials

TrialOutcome dp_alpha_trial(const DPFunction& g, const AlphaDraw& r) {
  const Shape& dom = g.dpshape().domain();
  require_point(dom, r.x);
  require_point(dom, r.y);
  if (!r.a.within(g.k())) throw std::invalid_argument("A names coordinates beyond k");
  for (auto i : r.a.elements()) {
    if (r.x[i] != r.y[i]) throw std::invalid_argument("malformed T(alpha) draw: y differs from x on A");
  }
  TrialOutcome out;
  out.queries = {r.x, r.y};
  out.accepted = agree_on(g, dom.offset(r.x), dom.offset(r.y), r.a);
  return out;
}

TrialOutcome dp_fixed_t_trial(const DPFunction& g, const FixedTDraw& r) {
  const Shape& dom = g.dpshape().domain();
  require_point(dom, r.x);
  require_point(dom, r.y);
  if (r.t.size() > g.k() || !r.t.within(g.k())) throw std::invalid_argument("T(t) needs T within [k]");
  for (auto i : r.t.elements()) {
    if (r.x[i] != r.y[i]) throw std::invalid_argument("malformed T(t) draw: y differs from x on T");
  }
  TrialOutcome out;
  out.queries = {r.x, r.y};
  out.accepted = agree_on(g, dom.offset(r.x), dom.offset(r.y), r.t);
  return out;
}

TrialOutcome run_dp_trial(const DPFunction& g, const DPRandomness& r) {
  return std::visit(
      [&](const auto& draw) {
        if constexpr (std::is_same_v<std::decay_t<decltype(draw)>, AlphaDraw>) return dp_alpha_trial(g, draw);
        else return dp_fixed_t_trial(g, draw);
      },
      r);
}

AlphaDraw sample_alpha(const DPShape& shape, double alpha, Rng& rng) {
  const Shape& dom = shape.domain();
  Point::Storage x(dom.rank()), y(dom.rank());
  std::uint64_t a = 0;
  for (std::size_t i = 0; i < dom.rank(); ++i) x[i] = static_cast<Coordinate>(rng.below(dom.dim(i)));
  for (std::size_t i = 0; i < dom.rank(); ++i) {
    if (rng.bernoulli(alpha)) {
      y[i] = x[i];
      a |= std::uint64_t{1} << i;
    } else {
      y[i] = static_cast<Coordinate>(rng.below(dom.dim(i)));
    }
  }
  return AlphaDraw{Point(std::move(x)), Point(std::move(y)), IndexSet(a)};
}

FixedTDraw sample_fixed_t(const DPShape& shape, std::size_t t, Rng& rng) {
  const Shape& dom = shape.domain();
  const std::size_t k = dom.rank();
  if (t > k) throw std::invalid_argument("t = " + std::to_string(t) + " exceeds k = " + std::to_string(k));
  Point::Storage x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = static_cast<Coordinate>(rng.below(dom.dim(i)));
  // Uniform t-subset by a partial Fisher-Yates shuffle of the coordinates.
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::uint64_t tmask = 0;
  for (std::size_t i = 0; i < t; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(k - i));
    std::swap(order[i], order[j]);
    tmask |= std::uint64_t{1} << order[i];
  }
  for (std::size_t i = 0; i < k; ++i) {
    y[i] = ((tmask >> i) & 1U) ? x[i] : static_cast<Coordinate>(rng.below(dom.dim(i)));
  }
  return FixedTDraw{Point(std::move(x)), IndexSet(tmask), Point(std::move(y))};
}

std::size_t default_fixed_t(std::size_t k) noexcept { return std::max<std::size_t>(1, k / 5); }

// ---------------------------------------------------------------- exact rejection

Rational exact_alpha_rejection(const DPFunction& g, const Rational& alpha, std::uint64_t budget) {
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0, 1]");
  const Shape& dom = g.dpshape().domain();
  const std::size_t k = g.k();
  const std::size_t n = dom.size();
  charge(BigInt(n) * BigInt(n) << static_cast<unsigned>(k), budget, "T(alpha) enumeration");
  Rational total(0);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a) {
    std::uint64_t rejecting = 0;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (consistent(dom, x, y, a) && !agree_on(g, x, y, IndexSet(a))) ++rejecting;
      }
    }
    if (rejecting) total += subset_weight(alpha, k, a) * Rational(BigInt(rejecting), BigInt(n) * free_volume(dom, a));
  }
  return total;
}

Rational exact_fixed_t_rejection(const DPFunction& g, std::size_t t, std::uint64_t budget) {
  const Shape& dom = g.dpshape().domain();
  const std::size_t k = g.k();
  if (t > k) throw std::invalid_argument("t = " + std::to_string(t) + " exceeds k = " + std::to_string(k));
  const std::size_t n = dom.size();
  charge(BigInt(n) * BigInt(n) * binomial(k, t), budget, "T(t) enumeration");
  Rational total(0);
  for (std::uint64_t tmask = 0; tmask < (std::uint64_t{1} << k); ++tmask) {
    if (static_cast<std::size_t>(std::popcount(tmask)) != t) continue;
    std::uint64_t rejecting = 0;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (consistent(dom, x, y, tmask) && !agree_on(g, x, y, IndexSet(tmask))) ++rejecting;
      }
    }
    if (rejecting) total += Rational(BigInt(rejecting), BigInt(n) * free_volume(dom, tmask));
  }
  return total / binomial(k, t);
}

// ---------------------------------------------------------------- decoding

PluralityDecode dp_plurality_decode(const DPFunction& g) {
  const Shape& dom = g.dpshape().domain();
  const std::size_t k = g.k();
  const std::size_t m = g.dpshape().alphabet();
  PluralityDecode out;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<std::uint64_t>> votes(dom.dim(i), std::vector<std::uint64_t>(m, 0));
    for (std::size_t x = 0; x < dom.size(); ++x) ++votes[(x / dom.stride(i)) % dom.dim(i)][g.at(x, i)];
    std::vector<Symbol> h(dom.dim(i));
    for (std::size_t v = 0; v < h.size(); ++v) {
      // max_element returns the first maximum, i.e. the smallest symbol on ties.
      h[v] = static_cast<Symbol>(std::max_element(votes[v].begin(), votes[v].end()) - votes[v].begin());
    }
    out.components.push_back(std::move(h));
  }
  std::uint64_t agreeing = 0;
  for (std::size_t x = 0; x < dom.size(); ++x) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) ok = g.at(x, i) == out.components[i][(x / dom.stride(i)) % dom.dim(i)];
    agreeing += ok;
  }
  out.agreement = Rational(BigInt(agreeing), BigInt(dom.size()));
  return out;
}

DPFunction sic_to_dp_bridge(const BinaryTensor& f_in, const Point& a, std::uint64_t budget) {
  const Shape& shape = f_in.shape();
  const std::size_t anchor = shape.offset(a);
  const std::size_t d = shape.rank();
  charge(BigInt(shape.size()) * (BigInt(2) << static_cast<unsigned>(2 * d)), budget, "SiC-to-DP bridge");
  const BinaryTensor f = f_in.bit(anchor) ? flip(f_in) : f_in;

  std::vector<Symbol> table(shape.size() * d, 0);
  std::vector<std::uint8_t> local;
  for (std::size_t jb = 0; jb < shape.size(); ++jb) {
    const Point b = shape.point_at(jb);
    const IndexSet cube = delta(a, b);
    local.assign(std::size_t{1} << cube.size(), 0);
    for (std::size_t x = 0; x < local.size(); ++x) local[x] = f(project(a, b, CubePoint::from_local(cube, x)));
    const CubeAffineFit fit = nearest_affine_on_cube(local);
    const IndexSet s = CubePoint::from_local(cube, fit.support).ones();
    for (auto i : s.elements()) table[jb * d + i] = 1;
  }
  return DPFunction(DPShape(shape.dims(), 2), std::move(table));
}

// ---------------------------------------------------------------- bridge pair law

std::pair<Point, Point> sample_bridge_pair(const Shape& shape, Rng& rng) {
  Point::Storage b(shape.rank()), b2(shape.rank());
  for (std::size_t i = 0; i < shape.rank(); ++i) b[i] = static_cast<Coordinate>(rng.below(shape.dim(i)));
  for (std::size_t i = 0; i < shape.rank(); ++i) {
    const std::size_t n = shape.dim(i);
    const bool keep = rng.below(4) != 0;
    if (keep || n == 1) {
      b2[i] = b[i];
    } else {
      auto other = static_cast<Coordinate>(rng.below(n - 1));
      if (other >= b[i]) ++other;
      b2[i] = other;
    }
  }
  return {Point(std::move(b)), Point(std::move(b2))};
}

std::map<std::pair<std::size_t, std::size_t>, Rational> bridge_pair_distribution(const Shape& shape) {
  std::map<std::pair<std::size_t, std::size_t>, Rational> law;
  const Rational base(BigInt(1), BigInt(shape.size()));
  for (std::size_t u = 0; u < shape.size(); ++u) {
    for (std::size_t v = 0; v < shape.size(); ++v) {
      Rational p = base;
      for (std::size_t i = 0; i < shape.rank(); ++i) {
        const std::size_t n = shape.dim(i);
        const bool same = (u / shape.stride(i)) % n == (v / shape.stride(i)) % n;
        if (n == 1) continue;
        p *= same ? Rational(3, 4) : Rational(BigInt(1), BigInt(4 * (n - 1)));
      }
      law.emplace(std::make_pair(u, v), p);
    }
  }
  return law;
}

SymmetryTest symmetry_chi_square(const std::map<std::pair<std::size_t, std::size_t>, std::uint64_t>& counts) {
  auto count = [&](std::size_t u, std::size_t v) -> double {
    const auto it = counts.find({u, v});
    return it == counts.end() ? 0.0 : static_cast<double>(it->second);
  };
  std::set<std::pair<std::size_t, std::size_t>> unordered;
  for (const auto& [key, c] : counts) {
    if (key.first != key.second && c > 0) unordered.insert(std::minmax(key.first, key.second));
  }
  SymmetryTest out;
  for (const auto& [u, v] : unordered) {
    const double diff = count(u, v) - count(v, u);
    out.statistic += diff * diff / (count(u, v) + count(v, u));
    ++out.dof;
  }
  if (out.dof > 0) {
    boost::math::chi_squared dist(static_cast<double>(out.dof));
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  }
  return out;
}

AlphaPairLaw chained_alpha_pair_law(const DPShape& shape, const Rational& alpha) {
  const Shape& dom = shape.domain();
  const std::size_t k = dom.rank();
  const std::size_t n = dom.size();
  const std::uint64_t subsets = std::uint64_t{1} << k;
  AlphaPairLaw law;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::uint64_t a = 0; a < subsets; ++a) {
      const Rational wa = subset_weight(alpha, k, a) / free_volume(dom, a);
      for (std::size_t y = 0; y < n; ++y) {
        if (!consistent(dom, x, y, a)) continue;
        for (std::uint64_t a2 = 0; a2 < subsets; ++a2) {
          const Rational wa2 = subset_weight(alpha, k, a2) / free_volume(dom, a2);
          for (std::size_t y2 = 0; y2 < n; ++y2) {
            if (!consistent(dom, x, y2, a2)) continue;
            law[{y, y2, a & a2}] += wa * wa2 / n;
          }
        }
      }
    }
  }
  return law;
}

AlphaPairLaw direct_alpha_pair_law(const DPShape& shape, const Rational& beta) {
  const Shape& dom = shape.domain();
  const std::size_t k = dom.rank();
  const std::size_t n = dom.size();
  AlphaPairLaw law;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a) {
      const Rational w = subset_weight(beta, k, a) / free_volume(dom, a) / n;
      for (std::size_t y = 0; y < n; ++y) {
        if (consistent(dom, x, y, a)) law[{x, y, a}] += w;
      }
    }
  }
  return law;
}

// ---------------------------------------------------------------- text format

std::string format_dp_function(const DPFunction& g) {
  std::string s = "dpshape " + std::to_string(g.k()) + " " + std::to_string(g.dpshape().alphabet());
  for (auto n : g.dpshape().sizes()) s += " " + std::to_string(n);
  s += '\n';
  for (std::size_t x = 0; x < g.dpshape().domain().size(); ++x) {
    for (std::size_t i = 0; i < g.k(); ++i) {
      if (i) s += ' ';
      s += std::to_string(g.at(x, i));
    }
    s += '\n';
  }
  return s;
}

void write_dp_function(std::ostream& os, const DPFunction& g) { os << format_dp_function(g); }

DPFunction parse_dp_function(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty DP function file");
  const auto header = detail::split_spaces(lines[0], 1);
  if (header.front() != "dpshape") throw ParseError(1, "expected 'dpshape' header");
  if (header.size() < 4) throw ParseError(1, "dpshape needs k, M and at least one N_i");
  const std::size_t k = detail::parse_positive(header[1], 1, "k");
  const std::size_t m = detail::parse_positive(header[2], 1, "alphabet size");
  if (header.size() != 3 + k) {
    throw ParseError(1, "dpshape declares k = " + std::to_string(k) + " but lists " + std::to_string(header.size() - 3) +
                            " sizes");
  }
  std::vector<std::size_t> sizes;
  for (std::size_t i = 3; i < header.size(); ++i) sizes.push_back(detail::parse_positive(header[i], 1, "N_i"));
  std::optional<DPShape> shape;
  try {
    shape.emplace(std::move(sizes), m);
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, e.what());
  }
  const std::size_t points = shape->domain().size();
  if (lines.size() != points + 1) {
    throw ParseError(std::min(lines.size(), points + 1) + 1,
                     "expected " + std::to_string(points) + " value lines, got " + std::to_string(lines.size() - 1));
  }
  std::vector<Symbol> table;
  table.reserve(points * k);
  for (std::size_t x = 0; x < points; ++x) {
    const auto tokens = detail::split_spaces(lines[x + 1], x + 2);
    if (tokens.size() != k) throw ParseError(x + 2, "expected " + std::to_string(k) + " symbols");
    for (auto tok : tokens) {
      Symbol v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size() || (tok.size() > 1 && tok.front() == '0') || v >= m) {
        throw ParseError(x + 2, "invalid symbol '" + std::string(tok) + "'");
      }
      table.push_back(v);
    }
  }
  return DPFunction(std::move(*shape), std::move(table));
}

DPFunction read_dp_function(std::istream& is) { return parse_dp_function(detail::slurp(is)); }

}  // namespace rank1check
