#pragma once

// One-shot trials of the direct-sum tests. Every trial is a pure function of
// the tensor and an explicit randomness tuple, so the same code serves
// Monte-Carlo sampling and exhaustive enumeration.

#include "rank1check/core.hpp"
#include "rank1check/rng.hpp"

#include <optional>
#include <string_view>
#include <variant>

namespace rank1check {

enum class TestKind {
  kSicSubsets,   ///< square in a cube, subset formulation
  kSicCube,      ///< square in a cube, subcube formulation
  kShapka,       ///< (d+2)-query coboundary test
  kBlr,          ///< BLR affinity test on F2^D
  kConjectured,  ///< 4-query test through the cube's all-ones corner
};

inline constexpr TestKind kAllTestKinds[] = {TestKind::kSicSubsets, TestKind::kSicCube, TestKind::kShapka,
                                             TestKind::kBlr, TestKind::kConjectured};

std::string_view to_string(TestKind kind) noexcept;
/// Accepts "sic-subsets", "sic-cube", "shapka", "blr", "conjectured".
std::optional<TestKind> parse_test_kind(std::string_view name) noexcept;

struct SicSubsetsDraw {
  Point a, b;
  IndexSet s, t;
};

struct SicCubeDraw {
  Point a, b;
  CubePoint x, y;
};

struct ShapkaDraw {
  Point a, b;
};

/// x, y are points of the binary cube shape (2, ..., 2).
struct BlrDraw {
  Point x, y;
};

struct ConjecturedDraw {
  Point a, b;
  CubePoint x;
};

using TrialRandomness = std::variant<SicSubsetsDraw, SicCubeDraw, ShapkaDraw, BlrDraw, ConjecturedDraw>;

TestKind kind_of(const TrialRandomness& r) noexcept;

struct TrialOutcome {
  bool accepted = true;
  std::vector<Point> queries;
};

/// Queries a, b_S a, b_T a, b_U a with U = S xor T, i.e. the points
/// rho_{a,b}(0), rho_{a,b}(S), rho_{a,b}(T), rho_{a,b}(U) of the subcube.
TrialOutcome sic_subsets_trial(const BinaryTensor& f, const SicSubsetsDraw& r);
TrialOutcome sic_cube_trial(const BinaryTensor& f, const SicCubeDraw& r);
/// Parity over the multiset Q_{a,b} = {b} + {a_b^j : j in [d]} + ({a} iff d
/// is even), where a_b^j is a with coordinate j taken from b.
TrialOutcome shapka_trial(const BinaryTensor& f, const ShapkaDraw& r);
/// g must be defined on a binary cube shape; see boolean_function().
TrialOutcome blr_affinity_trial(const BinaryTensor& g, const BlrDraw& r);
TrialOutcome conjectured_trial(const BinaryTensor& f, const ConjecturedDraw& r);

TrialOutcome run_trial(const BinaryTensor& f, const TrialRandomness& r);
/// Same decision as run_trial without recording queries.
bool trial_accepts(const BinaryTensor& f, const TrialRandomness& r);

/// The Shapka query multiset Q_{a,b} in a fixed order: b, a_b^1..a_b^d, then a
/// when d is even.
std::vector<Point> shapka_queries(const Point& a, const Point& b);

/// g : F2^D -> F2 from its truth table of length 2^D (D >= 1). Entry j is
/// g(x) where x_1 is the most significant bit of j.
BinaryTensor boolean_function(std::span<const std::uint8_t> truth_table);

/// Draws randomness from the test's distribution: a, b uniform; S, T uniform
/// subsets; x, y uniform on C_{a,b}. Consumes a fixed pattern of draws per
/// kind, so the result is a deterministic function of the generator state.
TrialRandomness sample_randomness(TestKind kind, const Shape& shape, Rng& rng);

/// Number of queries the kind may issue on a rank-d domain (4 or d + 2).
std::size_t query_budget(TestKind kind, std::size_t rank) noexcept;

}  // namespace rank1check
