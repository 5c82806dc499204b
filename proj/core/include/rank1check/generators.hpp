#pragma once

// Seeded tensor generators for experiments.

#include "rank1check/core.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace rank1check {

enum class GeneratorKind {
  kDirectSum,
  kCorruptedRate,   ///< direct sum, then each entry flipped independently w.p. rate
  kCorruptedCount,  ///< direct sum, then exactly `count` distinct entries flipped
  kUniform,
  kIndicator,       ///< 1 at a single point, 0 elsewhere
  kCode,            ///< the tensor whose entry at offset j is bit j of `code`
};

std::string_view to_string(GeneratorKind kind) noexcept;
std::optional<GeneratorKind> parse_generator_kind(std::string_view name) noexcept;

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kDirectSum;
  Shape shape;
  std::uint64_t seed = 0;
  double rate = 0;
  std::uint64_t count = 0;
  std::optional<Point> point;  ///< indicator position; drawn from the seed when absent
  std::uint64_t code = 0;
};

/// Deterministic in its arguments. The corrupted kinds start from exactly the
/// tensor kDirectSum produces for the same shape and seed.
BinaryTensor generate(const GeneratorSpec& spec);

/// Uniformly random canonical direct sum.
DirectSum random_direct_sum(const Shape& shape, std::uint64_t seed);

}  // namespace rank1check
