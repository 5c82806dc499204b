#include "brute.hpp"
#include "rank1check/errors.hpp"
#include "rank1check/generators.hpp"
#include "rank1check/oracles.hpp"

#include <gtest/gtest.h>

using namespace rank1check;

namespace {

BinaryTensor random_tensor(const Shape& shape, std::uint64_t seed) {
  return generate(GeneratorSpec{GeneratorKind::kUniform, shape, seed, 0, 0, std::nullopt, 0});
}

const std::vector<TestKind> kTensorTests = {TestKind::kSicSubsets, TestKind::kSicCube, TestKind::kShapka,
                                            TestKind::kConjectured};

// The local view evaluated pointwise from its definition.
bool local_view_at(const BinaryTensor& f, const Point& a, const Point& p) {
  const std::size_t d = a.rank();
  bool v = d % 2 == 0 ? f(a) : false;
  for (std::size_t i = 0; i < d; ++i) v ^= f(a.with_coord(i, p[i]));
  return v;
}

}  // namespace

TEST(ExactRejection, TotalsAreRandomnessSpaceSizes) {
  const Shape shape({3, 2});
  const auto f = random_tensor(shape, 1);
  const Oracle oracle;
  EXPECT_EQ(oracle.exact_rejection(f, TestKind::kSicSubsets).total, 36 * 16);
  EXPECT_EQ(oracle.exact_rejection(f, TestKind::kSicCube).total, 36 * 16);
  EXPECT_EQ(oracle.exact_rejection(f, TestKind::kShapka).total, 36);
  EXPECT_EQ(oracle.exact_rejection(f, TestKind::kConjectured).total, 36 * 4);
  const auto g = random_tensor(Shape::binary_cube(3), 2);
  EXPECT_EQ(oracle.exact_rejection(g, TestKind::kBlr).total, 64);
  for (auto kind : kAllTestKinds) {
    if (kind == TestKind::kBlr) continue;
    const auto r = oracle.exact_rejection(f, kind);
    EXPECT_LE(r.rejecting, r.total);
    EXPECT_EQ(r.total, Oracle::randomness_space_size(shape, kind));
  }
}

TEST(ExactRejection, DirectSumsAreZero) {
  const Oracle oracle;
  for (const auto& shape : {Shape({2, 2}), Shape({3, 2, 2}), Shape({2, 1, 3})}) {
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << DirectSum::free_bits(shape)); ++c) {
      const auto f = materialize(DirectSum::from_code(shape, c));
      for (auto kind : kTensorTests) EXPECT_EQ(oracle.exact_rejection(f, kind).rejecting, 0);
    }
  }
}

TEST(ExactRejection, RefusesOverBudget) {
  const Oracle small(1000);
  const auto f = random_tensor(Shape({3, 3, 3}), 1);
  EXPECT_FALSE(small.can_enumerate(f.shape(), TestKind::kSicSubsets));
  EXPECT_THROW(small.exact_rejection(f, TestKind::kSicSubsets), BudgetExceeded);
  EXPECT_TRUE(small.can_enumerate(f.shape(), TestKind::kShapka));
  EXPECT_NO_THROW(small.exact_rejection(f, TestKind::kShapka));
  EXPECT_FALSE(Oracle().can_enumerate(f.shape(), TestKind::kBlr));
  EXPECT_THROW(Oracle().exact_rejection(f, TestKind::kBlr), ShapeMismatch);
}

TEST(ExactRejection, AndUnderBlr) {
  const std::uint8_t table[] = {0, 0, 0, 1};
  const auto r = Oracle().exact_rejection(boolean_function(table), TestKind::kBlr);
  EXPECT_EQ(r.rejecting, 6);
  EXPECT_EQ(r.total, 16);
}

TEST(NearestDirectSum, DirectSumIsItsOwnWitness) {
  const Shape shape({3, 2, 4});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ds = random_direct_sum(shape, seed);
    const auto near = Oracle().nearest_direct_sum(materialize(ds));
    EXPECT_EQ(near.distance, 0);
    EXPECT_EQ(near.witness, ds);
  }
}

TEST(NearestDirectSum, OneFlipOnCube) {
  const Shape shape({2, 2, 2});
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto ds = random_direct_sum(shape, seed);
    const auto f = materialize(ds).with_flipped(seed % 8);
    const auto near = Oracle().nearest_direct_sum(f);
    EXPECT_EQ(near.distance, Rational(1, 8));
    EXPECT_EQ(near.witness, ds);
  }
}

TEST(NearestDirectSum, CoordinateParityIsADirectSum) {
  for (const auto& shape : {Shape({2, 2, 2}), Shape({3, 3, 3}), Shape({4, 2, 5})}) {
    const auto f = BinaryTensor::generate(shape, [&](std::size_t j) {
      bool v = false;
      for (auto c : shape.point_at(j)) v ^= (c & 1) != 0;
      return v;
    });
    EXPECT_EQ(Oracle().nearest_direct_sum(f).distance, 0);
  }
}

TEST(NearestDirectSum, MatchesBruteForceWithLexTies) {
  const Oracle oracle;
  for (const auto& shape : {Shape({2, 2}), Shape({2, 2, 2}), Shape({3, 2}), Shape({3, 3})}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto f = random_tensor(shape, seed);
      const auto near = oracle.nearest_direct_sum(f);
      EXPECT_EQ(near.distance, brute::nearest_direct_sum_distance(f));
      EXPECT_EQ(distance(f, materialize(near.witness)), near.distance);
      // first canonical form, in lexicographic order, at the minimum distance
      std::optional<DirectSum> first;
      std::vector<std::string> strings;
      for (std::uint64_t c = 0; c < (std::uint64_t{1} << DirectSum::free_bits(shape)); ++c) {
        const auto ds = DirectSum::from_code(shape, c);
        if (distance(f, materialize(ds)) == near.distance) {
          if (!first || ds.canonical_string() < first->canonical_string()) first = ds;
        }
      }
      EXPECT_EQ(near.witness, *first);
    }
  }
}

TEST(NearestDirectSum, RefusesOverBudget) {
  const auto f = random_tensor(Shape({6, 6, 6}), 1);
  EXPECT_FALSE(Oracle(1000).can_find_nearest(f.shape()));
  EXPECT_THROW(Oracle(1000).nearest_direct_sum(f), BudgetExceeded);
}

TEST(NearestAffine, Examples) {
  const Oracle oracle;
  const auto cube = Shape::binary_cube(3);
  EXPECT_EQ(oracle.nearest_affine(AffineFunction{IndexSet::of({0, 2}), true}.materialize(cube)).distance, 0);
  const std::uint8_t and2[] = {0, 0, 0, 1};
  EXPECT_EQ(oracle.nearest_affine(boolean_function(and2)).distance, Rational(1, 4));
  const std::uint8_t maj3[] = {0, 0, 0, 1, 0, 1, 1, 1};
  const auto maj = boolean_function(maj3);
  EXPECT_EQ(oracle.nearest_affine(maj).distance, brute::nearest_affine_distance(maj));
  EXPECT_EQ(oracle.nearest_affine(maj).distance, Rational(1, 4));
}

TEST(NearestAffine, MatchesBruteForceWithTies) {
  const Oracle oracle;
  for (std::size_t dim = 1; dim <= 4; ++dim) {
    const auto cube = Shape::binary_cube(dim);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto g = random_tensor(cube, seed * 7 + dim);
      const auto near = oracle.nearest_affine(g);
      EXPECT_EQ(near.distance, brute::nearest_affine_distance(g));
      EXPECT_EQ(distance(g, near.witness.materialize(cube)), near.distance);
      bool found = false;
      for (int c = 0; c < 2 && !found; ++c) {
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << dim) && !found; ++s) {
          const AffineFunction cand{IndexSet(s), c != 0};
          if (distance(g, cand.materialize(cube)) == near.distance) {
            EXPECT_EQ(near.witness, cand);
            found = true;
          }
        }
      }
      EXPECT_TRUE(found);
    }
  }
}

TEST(NearestAffine, LocalIndexingOnCubeTables) {
  // x -> x_0 in local indexing is the table whose bit 0 of the index is set.
  const std::uint8_t x0[] = {0, 1, 0, 1};
  const auto fit = nearest_affine_on_cube(x0);
  EXPECT_EQ(fit.support, 1u);
  EXPECT_FALSE(fit.constant);
  EXPECT_EQ(fit.mismatches, 0u);
  const std::uint8_t one[] = {1};
  EXPECT_TRUE(nearest_affine_on_cube(one).constant);
  const std::uint8_t bad[] = {0, 1, 1};
  EXPECT_THROW(nearest_affine_on_cube(bad), std::invalid_argument);
}

TEST(LocalView, DirectSumsDecodeExactly) {
  for (const auto& shape : {Shape({2, 2}), Shape({3, 2, 2}), Shape({2, 3, 2, 2}), Shape({3, 3, 3})}) {
    const auto f = materialize(random_direct_sum(shape, 5));
    for (const auto& a : brute::all_points(shape)) EXPECT_EQ(materialize(local_view_decode(f, a)), f);
  }
}

TEST(LocalView, MatchesDefinitionPointwise) {
  for (const auto& shape : {Shape({2, 2}), Shape({3, 2, 2}), Shape({2, 2, 2, 2}), Shape({3, 3, 3})}) {
    const auto f = random_tensor(shape, 17);
    for (const auto& a : brute::all_points(shape)) {
      const auto decoded = materialize(local_view_decode(f, a));
      for (const auto& p : brute::all_points(shape)) ASSERT_EQ(decoded(p), local_view_at(f, a, p));
    }
  }
}

TEST(LocalView, EvenRankWithZeroAnchorValue) {
  const Shape shape({3, 3});
  const auto f = random_tensor(shape, 23);
  for (const auto& a : brute::all_points(shape)) {
    if (f(a)) continue;
    const auto decoded = materialize(local_view_decode(f, a));
    for (const auto& p : brute::all_points(shape)) {
      EXPECT_EQ(decoded(p), f(a.with_coord(0, p[0])) ^ f(a.with_coord(1, p[1])));
    }
  }
}

TEST(LocalView, DistanceEqualsAnchorRejection) {
  for (const auto& shape : {Shape({2, 2}), Shape({2, 2, 2}), Shape({3, 2, 2}), Shape({3, 3, 3})}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto f = random_tensor(shape, 40 + seed);
      const auto points = brute::all_points(shape);
      for (const auto& a : points) {
        std::size_t hits = 0;
        for (const auto& b : points) {
          bool p = f(b);
          for (std::size_t j = 0; j < shape.rank(); ++j) p ^= f(brute::mix(a, b, std::uint64_t{1} << j));
          if (shape.rank() % 2 == 0) p ^= f(a);
          hits += p ? 1 : 0;
        }
        const Rational expected(BigInt(hits), BigInt(points.size()));
        EXPECT_EQ(distance(f, materialize(local_view_decode(f, a))), expected);
        EXPECT_EQ(shapka_anchor_rejection(f, a), expected);
      }
    }
  }
}

TEST(LocalView, BestAnchorOnOneFlip) {
  const Shape shape({2, 2, 2});
  const auto f = materialize(random_direct_sum(shape, 3)).with_flipped(5);
  const auto best = best_anchor_decode(f);
  EXPECT_EQ(best.distance, Rational(1, 8));
  EXPECT_EQ(best.distance, Oracle().nearest_direct_sum(f).distance);
  EXPECT_EQ(distance(f, materialize(best.decoded)), best.distance);
  EXPECT_EQ(materialize(local_view_decode(f, best.anchor)), materialize(best.decoded));
}

TEST(ResidualIdentity, HoldsOnSmallShapes) {
  for (const auto& shape : {Shape({2, 2}), Shape({2, 2, 2}), Shape({3, 2, 3}), Shape({2, 2, 2, 2})}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto f = random_tensor(shape, seed);
      for (const auto& a : brute::all_points(shape)) {
        for (const auto& b : brute::all_points(shape)) {
          const auto sides = shapka_residual_identity_check(f, a, b);
          ASSERT_EQ(sides.residual, sides.parity);
          ASSERT_EQ(sides.residual, f(b) != local_view_at(f, a, b));
        }
      }
    }
  }
  const auto ds = materialize(random_direct_sum(Shape({3, 3}), 1));
  const auto sides = shapka_residual_identity_check(ds, Point{0, 1}, Point{2, 2});
  EXPECT_FALSE(sides.residual);
  EXPECT_FALSE(sides.parity);
}

TEST(BiasedCharacter, ClosedForm) {
  EXPECT_EQ(biased_character_probability(0), 1);
  EXPECT_EQ(biased_character_probability(1), Rational(1, 3));
  EXPECT_EQ(biased_character_probability(2), Rational(5, 9));
  for (std::size_t s = 0; s <= 6; ++s) {
    for (std::size_t dim = s; dim <= 6; ++dim) {
      EXPECT_EQ(biased_character_probability_enumerated(s, dim), biased_character_probability(s));
    }
    if (s > 0) {
      EXPECT_LE(biased_character_probability(s), Rational(2, 3));
    }
  }
  EXPECT_THROW(biased_character_probability_enumerated(3, 2), std::invalid_argument);
}
