#include "rank1check/testers.hpp"

#include <array>

namespace rank1check {

namespace {

// Every query of the subcube-based tests is "a with the axes in take_b copied
// from b"; sinks see queries in that form.
struct NullSink {
  void operator()(const Point&, const Point&, IndexSet) const noexcept {}
  void point(const Point&) const noexcept {}
};

struct RecordingSink {
  std::vector<Point>* out;
  void operator()(const Point& a, const Point& b, IndexSet take_b) const { out->push_back(splice(b, a, take_b)); }
  void point(const Point& p) const { out->push_back(p); }
};

std::size_t mixed_offset(const Shape& shape, const Point& a, const Point& b, IndexSet take_b) noexcept {
  std::size_t off = 0;
  const auto& strides = shape.strides();
  for (std::size_t i = 0; i < strides.size(); ++i) off += (take_b.contains(i) ? b[i] : a[i]) * strides[i];
  return off;
}

void require_points(const Shape& shape, const Point& a, const Point& b) {
  if (!shape.contains(a) || !shape.contains(b)) {
    throw ShapeMismatch("randomness points " + a.to_string() + ", " + b.to_string() + " are not in shape " +
                        shape.to_string());
  }
}

template <class Sink>
bool query(const BinaryTensor& f, const Point& a, const Point& b, IndexSet take_b, const Sink& sink) {
  sink(a, b, take_b);
  return f.bit(mixed_offset(f.shape(), a, b, take_b));
}

template <class Sink>
bool sic_subsets_impl(const BinaryTensor& f, const SicSubsetsDraw& r, const Sink& sink) {
  require_points(f.shape(), r.a, r.b);
  const std::size_t d = f.shape().rank();
  if (!r.s.within(d) || !r.t.within(d)) throw ShapeMismatch("subset names axes beyond the tensor rank");
  bool parity = query(f, r.a, r.b, IndexSet{}, sink);
  parity ^= query(f, r.a, r.b, r.s, sink);
  parity ^= query(f, r.a, r.b, r.t, sink);
  parity ^= query(f, r.a, r.b, r.s ^ r.t, sink);
  return !parity;
}

template <class Sink>
bool sic_cube_impl(const BinaryTensor& f, const SicCubeDraw& r, const Sink& sink) {
  require_points(f.shape(), r.a, r.b);
  const IndexSet cube = delta(r.a, r.b);
  if (!(r.x.mask() == cube) || !(r.y.mask() == cube)) throw ShapeMismatch("cube point mask differs from delta(a, b)");
  bool parity = query(f, r.a, r.b, IndexSet{}, sink);
  parity ^= query(f, r.a, r.b, r.x.ones(), sink);
  parity ^= query(f, r.a, r.b, r.y.ones(), sink);
  parity ^= query(f, r.a, r.b, r.x.ones() ^ r.y.ones(), sink);
  return !parity;
}

template <class Sink>
bool shapka_impl(const BinaryTensor& f, const ShapkaDraw& r, const Sink& sink) {
  require_points(f.shape(), r.a, r.b);
  const std::size_t d = f.shape().rank();
  bool parity = query(f, r.a, r.b, IndexSet::full(d), sink);
  for (std::size_t j = 0; j < d; ++j) parity ^= query(f, r.a, r.b, IndexSet(std::uint64_t{1} << j), sink);
  if (d % 2 == 0) parity ^= query(f, r.a, r.b, IndexSet{}, sink);
  return !parity;
}

std::size_t cube_index(const Shape& shape, const Point& x) {
  if (!shape.contains(x)) throw ShapeMismatch("BLR point " + x.to_string() + " is not in " + shape.to_string());
  return shape.offset(x);
}

template <class Sink>
bool blr_impl(const BinaryTensor& g, const BlrDraw& r, const Sink& sink) {
  const Shape& shape = g.shape();
  if (!shape.is_binary_cube()) throw ShapeMismatch("BLR needs a function on a binary cube, got " + shape.to_string());
  const std::size_t x = cube_index(shape, r.x);
  const std::size_t y = cube_index(shape, r.y);
  // On (2,...,2) the row-major offset is the bit vector itself, so xor of
  // offsets is the offset of x (+) y.
  const std::size_t xy = x ^ y;
  sink.point(shape.point_at(0));
  sink.point(r.x);
  sink.point(r.y);
  sink.point(shape.point_at(xy));
  return !(g.bit(0) ^ g.bit(x) ^ g.bit(y) ^ g.bit(xy));
}

template <class Sink>
bool conjectured_impl(const BinaryTensor& f, const ConjecturedDraw& r, const Sink& sink) {
  require_points(f.shape(), r.a, r.b);
  const IndexSet cube = delta(r.a, r.b);
  if (!(r.x.mask() == cube)) throw ShapeMismatch("cube point mask differs from delta(a, b)");
  bool parity = query(f, r.a, r.b, IndexSet{}, sink);
  parity ^= query(f, r.a, r.b, r.x.ones(), sink);
  parity ^= query(f, r.a, r.b, cube, sink);
  parity ^= query(f, r.a, r.b, r.x.ones() ^ cube, sink);
  return !parity;
}

template <class Sink>
bool dispatch(const BinaryTensor& f, const TrialRandomness& r, const Sink& sink) {
  return std::visit(
      [&](const auto& draw) {
        using T = std::decay_t<decltype(draw)>;
        if constexpr (std::is_same_v<T, SicSubsetsDraw>) return sic_subsets_impl(f, draw, sink);
        else if constexpr (std::is_same_v<T, SicCubeDraw>) return sic_cube_impl(f, draw, sink);
        else if constexpr (std::is_same_v<T, ShapkaDraw>) return shapka_impl(f, draw, sink);
        else if constexpr (std::is_same_v<T, BlrDraw>) return blr_impl(f, draw, sink);
        else return conjectured_impl(f, draw, sink);
      },
      r);
}

Point uniform_point(const Shape& shape, Rng& rng) {
  Point::Storage c(shape.rank());
  for (std::size_t i = 0; i < shape.rank(); ++i) c[i] = static_cast<Coordinate>(rng.below(shape.dim(i)));
  return Point(std::move(c));
}

IndexSet uniform_subset(std::size_t rank, Rng& rng) { return IndexSet(rng() & IndexSet::full(rank).mask()); }

CubePoint uniform_cube_point(IndexSet mask, Rng& rng) { return CubePoint(mask, IndexSet(rng() & mask.mask())); }

template <class Impl, class Draw>
TrialOutcome record(const BinaryTensor& f, const Draw& r, Impl impl) {
  TrialOutcome out;
  out.accepted = impl(f, r, RecordingSink{&out.queries});
  return out;
}

}  // namespace

std::string_view to_string(TestKind kind) noexcept {
  switch (kind) {
    case TestKind::kSicSubsets: return "sic-subsets";
    case TestKind::kSicCube: return "sic-cube";
    case TestKind::kShapka: return "shapka";
    case TestKind::kBlr: return "blr";
    case TestKind::kConjectured: return "conjectured";
  }
  return "unknown";
}

std::optional<TestKind> parse_test_kind(std::string_view name) noexcept {
  for (auto k : kAllTestKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

TestKind kind_of(const TrialRandomness& r) noexcept {
  constexpr std::array<TestKind, 5> kinds = {TestKind::kSicSubsets, TestKind::kSicCube, TestKind::kShapka,
                                             TestKind::kBlr, TestKind::kConjectured};
  return kinds[r.index()];
}

TrialOutcome sic_subsets_trial(const BinaryTensor& f, const SicSubsetsDraw& r) {
  return record(f, r, [](const auto& t, const auto& d, const auto& s) { return sic_subsets_impl(t, d, s); });
}

TrialOutcome sic_cube_trial(const BinaryTensor& f, const SicCubeDraw& r) {
  return record(f, r, [](const auto& t, const auto& d, const auto& s) { return sic_cube_impl(t, d, s); });
}

TrialOutcome shapka_trial(const BinaryTensor& f, const ShapkaDraw& r) {
  return record(f, r, [](const auto& t, const auto& d, const auto& s) { return shapka_impl(t, d, s); });
}

TrialOutcome blr_affinity_trial(const BinaryTensor& g, const BlrDraw& r) {
  return record(g, r, [](const auto& t, const auto& d, const auto& s) { return blr_impl(t, d, s); });
}

TrialOutcome conjectured_trial(const BinaryTensor& f, const ConjecturedDraw& r) {
  return record(f, r, [](const auto& t, const auto& d, const auto& s) { return conjectured_impl(t, d, s); });
}

TrialOutcome run_trial(const BinaryTensor& f, const TrialRandomness& r) {
  TrialOutcome out;
  out.accepted = dispatch(f, r, RecordingSink{&out.queries});
  return out;
}

bool trial_accepts(const BinaryTensor& f, const TrialRandomness& r) { return dispatch(f, r, NullSink{}); }

std::vector<Point> shapka_queries(const Point& a, const Point& b) {
  std::vector<Point> q;
  const std::size_t d = a.rank();
  q.push_back(splice(b, a, IndexSet::full(d)));
  for (std::size_t j = 0; j < d; ++j) q.push_back(splice(b, a, IndexSet(std::uint64_t{1} << j)));
  if (d % 2 == 0) q.push_back(a);
  return q;
}

BinaryTensor boolean_function(std::span<const std::uint8_t> truth_table) {
  const std::size_t n = truth_table.size();
  if (n < 2 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("truth table length " + std::to_string(n) + " is not a power of two >= 2");
  }
  return BinaryTensor::from_bits(Shape::binary_cube(static_cast<std::size_t>(std::countr_zero(n))), truth_table);
}

TrialRandomness sample_randomness(TestKind kind, const Shape& shape, Rng& rng) {
  switch (kind) {
    case TestKind::kSicSubsets: {
      Point a = uniform_point(shape, rng);
      Point b = uniform_point(shape, rng);
      IndexSet s = uniform_subset(shape.rank(), rng);
      IndexSet t = uniform_subset(shape.rank(), rng);
      return SicSubsetsDraw{std::move(a), std::move(b), s, t};
    }
    case TestKind::kSicCube: {
      Point a = uniform_point(shape, rng);
      Point b = uniform_point(shape, rng);
      const IndexSet cube = delta(a, b);
      CubePoint x = uniform_cube_point(cube, rng);
      CubePoint y = uniform_cube_point(cube, rng);
      return SicCubeDraw{std::move(a), std::move(b), x, y};
    }
    case TestKind::kShapka: {
      Point a = uniform_point(shape, rng);
      Point b = uniform_point(shape, rng);
      return ShapkaDraw{std::move(a), std::move(b)};
    }
    case TestKind::kBlr: {
      if (!shape.is_binary_cube()) throw ShapeMismatch("BLR randomness needs a binary cube shape");
      Point x = uniform_point(shape, rng);
      Point y = uniform_point(shape, rng);
      return BlrDraw{std::move(x), std::move(y)};
    }
    case TestKind::kConjectured: {
      Point a = uniform_point(shape, rng);
      Point b = uniform_point(shape, rng);
      CubePoint x = uniform_cube_point(delta(a, b), rng);
      return ConjecturedDraw{std::move(a), std::move(b), x};
    }
  }
  throw std::invalid_argument("unknown test kind");
}

std::size_t query_budget(TestKind kind, std::size_t rank) noexcept {
  return kind == TestKind::kShapka ? rank + 2 : 4;
}

}  // namespace rank1check
