#include "rank1check/generators.hpp"

#include "rank1check/errors.hpp"
#include "rank1check/rng.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace rank1check {

namespace {

constexpr std::array<std::pair<GeneratorKind, std::string_view>, 6> kNames = {{
    {GeneratorKind::kDirectSum, "direct-sum"},
    {GeneratorKind::kCorruptedRate, "corrupted-rate"},
    {GeneratorKind::kCorruptedCount, "corrupted-count"},
    {GeneratorKind::kUniform, "uniform"},
    {GeneratorKind::kIndicator, "indicator"},
    {GeneratorKind::kCode, "code"},
}};

// Stream ids under the generator seed.
constexpr std::uint64_t kComponentStream = 0;
constexpr std::uint64_t kCorruptionStream = 1;

std::vector<std::uint8_t> unpack(const BinaryTensor& f) {
  std::vector<std::uint8_t> bits(f.size());
  for (std::size_t j = 0; j < bits.size(); ++j) bits[j] = f.bit(j) ? 1 : 0;
  return bits;
}

// Floyd's algorithm: m distinct values of [0, n).
std::vector<std::uint64_t> distinct_offsets(std::uint64_t n, std::uint64_t m, Rng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  std::vector<std::uint64_t> out;
  out.reserve(m);
  for (std::uint64_t j = n - m; j < n; ++j) {
    std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) {
      t = j;
      chosen.insert(t);
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace

std::string_view to_string(GeneratorKind kind) noexcept {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

DirectSum random_direct_sum(const Shape& shape, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, kComponentStream);
  std::vector<DirectSum::Component> components(shape.rank());
  for (std::size_t i = 0; i < shape.rank(); ++i) {
    components[i].resize(shape.dim(i));
    for (auto& v : components[i]) v = static_cast<std::uint8_t>(rng() >> 63);
  }
  return DirectSum(shape, std::move(components));
}

BinaryTensor generate(const GeneratorSpec& spec) {
  const Shape& shape = spec.shape;
  switch (spec.kind) {
    case GeneratorKind::kDirectSum:
      return materialize(random_direct_sum(shape, spec.seed));
    case GeneratorKind::kCorruptedRate: {
      if (!(spec.rate >= 0.0 && spec.rate <= 1.0)) {
        throw std::invalid_argument("corruption rate must lie in [0, 1]");
      }
      auto bits = unpack(materialize(random_direct_sum(shape, spec.seed)));
      Rng rng = Rng::stream(spec.seed, kCorruptionStream);
      for (auto& b : bits) {
        if (rng.bernoulli(spec.rate)) b ^= 1;
      }
      return BinaryTensor::from_bits(shape, bits);
    }
    case GeneratorKind::kCorruptedCount: {
      if (spec.count > shape.size()) {
        throw std::invalid_argument("flip count " + std::to_string(spec.count) + " exceeds tensor size " +
                                    std::to_string(shape.size()));
      }
      auto bits = unpack(materialize(random_direct_sum(shape, spec.seed)));
      Rng rng = Rng::stream(spec.seed, kCorruptionStream);
      for (auto off : distinct_offsets(shape.size(), spec.count, rng)) bits[off] ^= 1;
      return BinaryTensor::from_bits(shape, bits);
    }
    case GeneratorKind::kUniform: {
      Rng rng = Rng::stream(spec.seed, kComponentStream);
      return BinaryTensor::generate(shape, [&](std::size_t) { return (rng() >> 63) != 0; });
    }
    case GeneratorKind::kIndicator: {
      std::size_t offset;
      if (spec.point) {
        offset = shape.offset(*spec.point);
      } else {
        Rng rng = Rng::stream(spec.seed, kComponentStream);
        offset = rng.below(shape.size());
      }
      return BinaryTensor(shape).with_flipped(offset);
    }
    case GeneratorKind::kCode: {
      if (shape.size() > 64) throw ShapeMismatch("code generator needs at most 64 entries");
      if (shape.size() < 64 && (spec.code >> shape.size()) != 0) {
        throw std::invalid_argument("code has bits beyond the tensor size");
      }
      return BinaryTensor::from_code(shape, spec.code);
    }
  }
  throw std::invalid_argument("unknown generator kind");
}

}  // namespace rank1check
