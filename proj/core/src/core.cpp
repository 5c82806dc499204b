#include "rank1check/core.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <ostream>
#include <sstream>

namespace rank1check {

namespace {

std::vector<std::uint64_t> parse_uint_list(std::string_view text, std::string_view what) {
  std::vector<std::uint64_t> values;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = text.find_first_of(",x", pos);
    std::string_view token = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw std::invalid_argument("malformed " + std::string(what) + ": '" + std::string(text) + "'");
    }
    values.push_back(v);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return values;
}

void require_same_rank(const Point& a, const Point& b) {
  if (a.rank() != b.rank()) {
    throw ShapeMismatch("points of rank " + std::to_string(a.rank()) + " and " + std::to_string(b.rank()));
  }
}

void require_same_shape(const BinaryTensor& f, const BinaryTensor& g) {
  if (!(f.shape() == g.shape())) {
    throw ShapeMismatch("tensor shapes " + f.shape().to_string() + " and " + g.shape().to_string());
  }
}

}  // namespace

// ---------------------------------------------------------------- Point

Point Point::parse(std::string_view text) {
  Storage coords;
  for (auto v : parse_uint_list(text, "point")) {
    if (v > std::numeric_limits<Coordinate>::max()) throw std::invalid_argument("coordinate out of range");
    coords.push_back(static_cast<Coordinate>(v));
  }
  return Point(std::move(coords));
}

Point Point::with_coord(std::size_t axis, Coordinate value) const {
  Storage c = coords_;
  c.at(axis) = value;
  return Point(std::move(c));
}

std::string Point::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(coords_[i]);
  }
  return s + ")";
}

std::ostream& operator<<(std::ostream& os, const Point& p) { return os << p.to_string(); }

// ---------------------------------------------------------------- Shape

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("shape needs at least one axis");
  if (dims_.size() > kMaxRank) throw std::invalid_argument("shape rank exceeds " + std::to_string(kMaxRank));
  strides_.assign(dims_.size(), 1);
  size_ = 1;
  for (std::size_t i = dims_.size(); i-- > 0;) {
    if (dims_[i] == 0) throw std::invalid_argument("shape dimensions must be positive");
    if (dims_[i] > std::numeric_limits<Coordinate>::max()) throw std::invalid_argument("shape dimension too large");
    strides_[i] = size_;
    if (size_ > kMaxTensorSize / dims_[i]) throw std::invalid_argument("shape too large to address densely");
    size_ *= dims_[i];
  }
}

Shape Shape::parse(std::string_view text) {
  auto values = parse_uint_list(text, "shape");
  return Shape(std::vector<std::size_t>(values.begin(), values.end()));
}

Shape Shape::binary_cube(std::size_t dimension) { return Shape(std::vector<std::size_t>(dimension, 2)); }

bool Shape::is_binary_cube() const noexcept {
  return std::all_of(dims_.begin(), dims_.end(), [](std::size_t n) { return n == 2; });
}

bool Shape::contains(const Point& p) const noexcept {
  if (p.rank() != rank()) return false;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (p[i] >= dims_[i]) return false;
  }
  return true;
}

std::size_t Shape::offset(const Point& p) const {
  if (!contains(p)) throw ShapeMismatch("point " + p.to_string() + " is not in shape " + to_string());
  std::size_t off = 0;
  for (std::size_t i = 0; i < rank(); ++i) off += p[i] * strides_[i];
  return off;
}

Point Shape::point_at(std::size_t offset) const {
  if (offset >= size_) throw std::out_of_range("offset outside shape");
  Point::Storage c(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    c[i] = static_cast<Coordinate>(offset / strides_[i]);
    offset %= strides_[i];
  }
  return Point(std::move(c));
}

std::string Shape::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(dims_[i]);
  }
  return s;
}

// ---------------------------------------------------------------- IndexSet

IndexSet IndexSet::full(std::size_t rank) {
  if (rank > 64) throw std::invalid_argument("index set rank exceeds 64");
  return IndexSet(rank == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rank) - 1);
}

IndexSet IndexSet::of(std::initializer_list<std::size_t> axes) {
  IndexSet s;
  for (auto a : axes) s = s.with(a);
  return s;
}

bool IndexSet::within(std::size_t rank) const noexcept {
  return rank >= 64 || (mask_ >> rank) == 0;
}

IndexSet IndexSet::with(std::size_t axis) const {
  if (axis >= 64) throw std::out_of_range("axis out of range");
  return IndexSet(mask_ | (std::uint64_t{1} << axis));
}

std::vector<std::size_t> IndexSet::elements() const {
  std::vector<std::size_t> out;
  for (std::uint64_t m = mask_; m; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  return out;
}

std::string IndexSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (auto a : elements()) {
    if (!first) s += ',';
    s += std::to_string(a);
    first = false;
  }
  return s + "}";
}

// ---------------------------------------------------------------- CubePoint

CubePoint::CubePoint(IndexSet mask, IndexSet ones) : mask_(mask), ones_(ones) {
  if (!ones.subset_of(mask)) throw ShapeMismatch("cube point assigns axes outside its mask");
}

CubePoint CubePoint::from_local(IndexSet mask, std::uint64_t local) {
  std::uint64_t ones = 0;
  std::uint64_t r = 0;
  for (std::uint64_t m = mask.mask(); m; m &= m - 1, ++r) {
    if ((local >> r) & 1U) ones |= m & (~m + 1);
  }
  if (r < 64 && (local >> r) != 0) throw std::out_of_range("local index exceeds cube size");
  return CubePoint(mask, IndexSet(ones));
}

bool CubePoint::bit(std::size_t axis) const {
  if (!mask_.contains(axis)) throw ShapeMismatch("axis " + std::to_string(axis) + " is not in the cube mask");
  return ones_.contains(axis);
}

std::uint64_t CubePoint::local_index() const noexcept {
  std::uint64_t local = 0;
  std::uint64_t r = 0;
  for (std::uint64_t m = mask_.mask(); m; m &= m - 1, ++r) {
    if (ones_.mask() & m & (~m + 1)) local |= std::uint64_t{1} << r;
  }
  return local;
}

CubePoint CubePoint::operator^(const CubePoint& other) const {
  if (!(mask_ == other.mask_)) throw ShapeMismatch("xor of cube points with different masks");
  return CubePoint(mask_, ones_ ^ other.ones_);
}

// ---------------------------------------------------------------- BinaryTensor

BinaryTensor::BinaryTensor(Shape shape) : shape_(std::move(shape)), words_((shape_.size() + 63) / 64, 0) {}

BinaryTensor BinaryTensor::from_bits(Shape shape, std::span<const std::uint8_t> bits) {
  if (bits.size() != shape.size()) {
    throw ShapeMismatch("expected " + std::to_string(shape.size()) + " bits, got " + std::to_string(bits.size()));
  }
  for (auto b : bits) {
    if (b > 1) throw std::invalid_argument("tensor entries must be 0 or 1");
  }
  return generate(std::move(shape), [&](std::size_t j) { return bits[j] != 0; });
}

BinaryTensor BinaryTensor::from_code(Shape shape, std::uint64_t code) {
  if (shape.size() > 64) throw std::invalid_argument("from_code needs at most 64 entries");
  if (shape.size() < 64 && (code >> shape.size()) != 0) throw std::invalid_argument("code has bits beyond tensor size");
  BinaryTensor t(std::move(shape));
  t.words_[0] = code;
  return t;
}

BinaryTensor BinaryTensor::from_bit_string(Shape shape, std::string_view bits) {
  if (bits.size() != shape.size()) {
    throw ShapeMismatch("expected " + std::to_string(shape.size()) + " bits, got " + std::to_string(bits.size()));
  }
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must contain only 0 and 1");
  }
  return generate(std::move(shape), [&](std::size_t j) { return bits[j] == '1'; });
}

std::uint64_t BinaryTensor::code() const {
  if (size() > 64) throw std::logic_error("code() needs at most 64 entries");
  return words_[0];
}

std::size_t BinaryTensor::count_ones() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BinaryTensor BinaryTensor::with_flipped(std::size_t offset) const {
  if (offset >= size()) throw std::out_of_range("offset outside tensor");
  BinaryTensor t = *this;
  t.words_[offset >> 6] ^= std::uint64_t{1} << (offset & 63);
  return t;
}

BinaryTensor BinaryTensor::operator^(const BinaryTensor& other) const {
  require_same_shape(*this, other);
  BinaryTensor t = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) t.words_[i] ^= other.words_[i];
  return t;
}

std::string BinaryTensor::to_bit_string() const {
  std::string s(size(), '0');
  for (std::size_t j = 0; j < size(); ++j) {
    if (bit(j)) s[j] = '1';
  }
  return s;
}

// ---------------------------------------------------------------- DirectSum

DirectSum::DirectSum(Shape shape, std::vector<Component> components)
    : shape_(std::move(shape)), components_(std::move(components)) {
  if (components_.size() != shape_.rank()) throw ShapeMismatch("direct sum needs one component per axis");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].size() != shape_.dim(i)) throw ShapeMismatch("component length differs from axis size");
    for (auto v : components_[i]) {
      if (v > 1) throw std::invalid_argument("component values must be 0 or 1");
    }
  }
  // Fold each later component's value at 0 into the first component.
  for (std::size_t i = 1; i < components_.size(); ++i) {
    if (components_[i][0] != 0) {
      for (auto& v : components_[i]) v ^= 1;
      for (auto& v : components_[0]) v ^= 1;
    }
  }
}

DirectSum DirectSum::zero(Shape shape) {
  std::vector<Component> comps;
  for (auto n : shape.dims()) comps.emplace_back(n, 0);
  return DirectSum(std::move(shape), std::move(comps));
}

std::size_t DirectSum::free_bits(const Shape& shape) noexcept {
  std::size_t m = 1;
  for (auto n : shape.dims()) m += n - 1;
  return m;
}

DirectSum DirectSum::from_code(const Shape& shape, std::uint64_t code) {
  const std::size_t m = free_bits(shape);
  if (m > 63) throw std::invalid_argument("too many canonical direct sums to index by code");
  if ((code >> m) != 0) throw std::out_of_range("direct sum code out of range");
  std::vector<Component> comps;
  std::size_t pos = 0;  // position in the free-bit string, most significant first
  auto next = [&] { return static_cast<std::uint8_t>((code >> (m - 1 - pos++)) & 1U); };
  for (std::size_t i = 0; i < shape.rank(); ++i) {
    Component c(shape.dim(i), 0);
    for (std::size_t x = (i == 0 ? 0 : 1); x < c.size(); ++x) c[x] = next();
    comps.push_back(std::move(c));
  }
  return DirectSum(shape, std::move(comps));
}

bool DirectSum::operator()(const Point& a) const { return eval_direct_sum(*this, a); }

std::string DirectSum::canonical_string() const {
  std::string s;
  for (const auto& c : components_) {
    for (auto v : c) s += v ? '1' : '0';
  }
  return s;
}

// ---------------------------------------------------------------- operations

IndexSet delta(const Point& a, const Point& b) {
  require_same_rank(a, b);
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (a[i] != b[i]) m |= std::uint64_t{1} << i;
  }
  return IndexSet(m);
}

Point splice(const Point& a, const Point& b, IndexSet s) {
  require_same_rank(a, b);
  if (!s.within(a.rank())) throw ShapeMismatch("index set names axes beyond the point rank");
  Point::Storage c(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) c[i] = s.contains(i) ? a[i] : b[i];
  return Point(std::move(c));
}

Point project(const Point& a, const Point& b, const CubePoint& x) {
  if (!(x.mask() == delta(a, b))) throw ShapeMismatch("cube point mask differs from delta(a, b)");
  return splice(b, a, x.ones());
}

bool eval_direct_sum(const DirectSum& ds, const Point& a) {
  if (!ds.shape().contains(a)) throw ShapeMismatch("point " + a.to_string() + " is not in shape " + ds.shape().to_string());
  bool v = false;
  for (std::size_t i = 0; i < a.rank(); ++i) v ^= ds.components()[i][a[i]] != 0;
  return v;
}

BinaryTensor materialize(const DirectSum& ds) {
  const Shape& shape = ds.shape();
  const std::size_t d = shape.rank();
  // Walk offsets in order while maintaining the running xor per axis prefix.
  std::vector<Coordinate> idx(d, 0);
  std::vector<std::uint8_t> prefix(d + 1, 0);
  for (std::size_t i = 0; i < d; ++i) prefix[i + 1] = prefix[i] ^ ds.components()[i][0];
  std::vector<std::uint8_t> bits(shape.size());
  for (std::size_t j = 0; j < shape.size(); ++j) {
    bits[j] = prefix[d];
    std::size_t axis = d;
    while (axis-- > 0) {
      if (++idx[axis] < shape.dim(axis)) break;
      idx[axis] = 0;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
    for (std::size_t i = axis; i < d; ++i) prefix[i + 1] = prefix[i] ^ ds.components()[i][idx[i]];
  }
  return BinaryTensor::from_bits(shape, bits);
}

std::optional<DirectSum> as_direct_sum(const BinaryTensor& f) {
  const Shape& shape = f.shape();
  // Candidate from the axis lines through the origin: f1(x) = f(x,0,...,0),
  // fi(x) = f(0,..,x,..,0) (+) f(0) for i >= 2.
  const bool origin = f.bit(0);
  std::vector<DirectSum::Component> comps;
  for (std::size_t i = 0; i < shape.rank(); ++i) {
    DirectSum::Component c(shape.dim(i));
    for (std::size_t x = 0; x < c.size(); ++x) {
      bool v = f.bit(x * shape.stride(i));
      if (i > 0) v ^= origin;
      c[x] = v;
    }
    comps.push_back(std::move(c));
  }
  DirectSum ds(shape, std::move(comps));
  if (materialize(ds) == f) return ds;
  return std::nullopt;
}

std::size_t hamming_distance(const BinaryTensor& f, const BinaryTensor& g) {
  require_same_shape(f, g);
  std::size_t n = 0;
  auto fw = f.words();
  auto gw = g.words();
  for (std::size_t i = 0; i < fw.size(); ++i) n += static_cast<std::size_t>(std::popcount(fw[i] ^ gw[i]));
  return n;
}

Rational distance(const BinaryTensor& f, const BinaryTensor& g) {
  return Rational(BigInt(hamming_distance(f, g)), BigInt(f.size()));
}

BinaryTensor reindex(const BinaryTensor& f, std::span<const Permutation> perms) {
  const Shape& shape = f.shape();
  if (perms.size() != shape.rank()) throw ShapeMismatch("need one permutation per axis");
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (perms[i].size() != shape.dim(i)) throw ShapeMismatch("permutation size differs from axis size");
    std::vector<bool> seen(perms[i].size(), false);
    for (auto v : perms[i]) {
      if (v >= perms[i].size() || seen[v]) throw std::invalid_argument("not a permutation");
      seen[v] = true;
    }
  }
  return BinaryTensor::generate(shape, [&](std::size_t j) {
    std::size_t src = 0;
    std::size_t rem = j;
    for (std::size_t i = 0; i < shape.rank(); ++i) {
      const std::size_t x = rem / shape.stride(i);
      rem %= shape.stride(i);
      src += perms[i][x] * shape.stride(i);
    }
    return f.bit(src);
  });
}

BinaryTensor flip(const BinaryTensor& f) {
  return BinaryTensor::generate(f.shape(), [&](std::size_t j) { return !f.bit(j); });
}

}  // namespace rank1check
