#include "brute.hpp"
#include "rank1check/errors.hpp"
#include "rank1check/generators.hpp"
#include "rank1check/oracles.hpp"
#include "rank1check/testers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace rank1check;

namespace {

BinaryTensor random_tensor(const Shape& shape, std::uint64_t seed) {
  return generate(GeneratorSpec{GeneratorKind::kUniform, shape, seed, 0, 0, std::nullopt, 0});
}

const std::vector<TestKind> kTensorTests = {TestKind::kSicSubsets, TestKind::kSicCube, TestKind::kShapka,
                                            TestKind::kConjectured};

std::vector<Point> sorted(std::vector<Point> v) {
  std::sort(v.begin(), v.end(), [](const Point& a, const Point& b) { return a.to_string() < b.to_string(); });
  return v;
}

}  // namespace

TEST(TestKind, NamesRoundTrip) {
  for (auto k : kAllTestKinds) EXPECT_EQ(parse_test_kind(to_string(k)), k);
  EXPECT_FALSE(parse_test_kind("bogus").has_value());
}

TEST(Completeness, RandomDirectSumsAcceptEverySampledTrial) {
  for (const auto& shape : {Shape({2, 2}), Shape({3, 4, 2}), Shape({5, 2, 3, 2}), Shape({2, 2, 2, 2, 2})}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto f = materialize(random_direct_sum(shape, seed));
      Rng rng(seed);
      for (int i = 0; i < 2000; ++i) {
        for (auto kind : kTensorTests) ASSERT_TRUE(run_trial(f, sample_randomness(kind, shape, rng)).accepted);
      }
    }
  }
}

TEST(Completeness, EveryRandomnessTupleOnSmallShapes) {
  for (const auto& shape : {Shape({2, 2}), Shape({3, 2}), Shape({2, 2, 2})}) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << DirectSum::free_bits(shape)); ++code) {
      const auto f = materialize(DirectSum::from_code(shape, code));
      const auto points = brute::all_points(shape);
      const std::uint64_t full = IndexSet::full(shape.rank()).mask();
      for (const auto& a : points) {
        for (const auto& b : points) {
          ASSERT_TRUE(shapka_trial(f, ShapkaDraw{a, b}).accepted);
          const IndexSet cube = delta(a, b);
          for (std::uint64_t s = 0; s <= full; ++s) {
            for (std::uint64_t t = 0; t <= full; ++t) {
              ASSERT_TRUE(sic_subsets_trial(f, SicSubsetsDraw{a, b, IndexSet(s), IndexSet(t)}).accepted);
            }
          }
          for (auto x : brute::submasks(cube.mask())) {
            const CubePoint cx(cube, IndexSet(x));
            ASSERT_TRUE(conjectured_trial(f, ConjecturedDraw{a, b, cx}).accepted);
            for (auto y : brute::submasks(cube.mask())) {
              ASSERT_TRUE(sic_cube_trial(f, SicCubeDraw{a, b, cx, CubePoint(cube, IndexSet(y))}).accepted);
            }
          }
        }
      }
    }
  }
}

TEST(Completeness, RankOneAcceptsEverything) {
  const Shape shape({3});
  for (const auto& f : brute::all_tensors(shape)) {
    for (auto kind : kTensorTests) EXPECT_EQ(brute::rejection(f, kind), 0) << to_string(kind);
  }
}

TEST(SicSubsets, EqualSubsetsAlwaysAccept) {
  const Shape shape({3, 3, 2});
  const auto f = random_tensor(shape, 1);
  Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    auto r = std::get<SicSubsetsDraw>(sample_randomness(TestKind::kSicSubsets, shape, rng));
    r.t = r.s;
    EXPECT_TRUE(sic_subsets_trial(f, r).accepted);
  }
}

TEST(SicSubsets, IndicatorMatchesOracle) {
  const Shape shape({2, 2});
  const auto f = BinaryTensor(shape).with_flipped(shape.offset(Point{0, 0}));
  std::uint64_t rejecting = 0, total = 0;
  for (const auto& a : brute::all_points(shape)) {
    for (const auto& b : brute::all_points(shape)) {
      for (std::uint64_t s = 0; s < 4; ++s) {
        for (std::uint64_t t = 0; t < 4; ++t) {
          ++total;
          rejecting += sic_subsets_trial(f, SicSubsetsDraw{a, b, IndexSet(s), IndexSet(t)}).accepted ? 0 : 1;
        }
      }
    }
  }
  EXPECT_EQ(total, 256u);
  const auto exact = Oracle().exact_rejection(f, TestKind::kSicSubsets);
  EXPECT_EQ(exact.total, 256);
  EXPECT_EQ(exact.rejecting, rejecting);
  EXPECT_EQ(exact.value(), brute::rejection(f, TestKind::kSicSubsets));
  EXPECT_GT(rejecting, 0u);
}

TEST(SicSubsets, QueriesAreSplices) {
  const Point a{0, 1, 2}, b{1, 0, 0};
  const auto f = random_tensor(Shape({2, 2, 3}), 5);
  const IndexSet s = IndexSet::of({0}), t = IndexSet::of({0, 2});
  const auto out = sic_subsets_trial(f, SicSubsetsDraw{a, b, s, t});
  ASSERT_EQ(out.queries.size(), 4u);
  EXPECT_EQ(out.queries[0], a);
  EXPECT_EQ(out.queries[1], (Point{1, 1, 2}));
  EXPECT_EQ(out.queries[2], (Point{1, 1, 0}));
  EXPECT_EQ(out.queries[3], (Point{0, 1, 0}));
  bool parity = false;
  for (const auto& q : out.queries) parity ^= f(q);
  EXPECT_EQ(out.accepted, !parity);
}

TEST(SicSubsets, RejectsBadRandomness) {
  const auto f = random_tensor(Shape({2, 2}), 1);
  EXPECT_THROW(sic_subsets_trial(f, SicSubsetsDraw{Point{0, 0}, Point{0, 2}, IndexSet{}, IndexSet{}}), ShapeMismatch);
  EXPECT_THROW(sic_subsets_trial(f, SicSubsetsDraw{Point{0, 0}, Point{0, 1}, IndexSet::of({2}), IndexSet{}}),
               ShapeMismatch);
}

TEST(SicCube, EqualCubePointsAlwaysAccept) {
  const Shape shape({3, 2, 4});
  const auto f = random_tensor(shape, 6);
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    auto r = std::get<SicCubeDraw>(sample_randomness(TestKind::kSicCube, shape, rng));
    r.y = r.x;
    EXPECT_TRUE(sic_cube_trial(f, r).accepted);
  }
}

TEST(SicCube, RejectsMaskMismatch) {
  const auto f = random_tensor(Shape({2, 2}), 1);
  const Point a{0, 0}, b{1, 1};
  EXPECT_THROW(sic_cube_trial(f, SicCubeDraw{a, b, CubePoint::zero(IndexSet::of({0})), CubePoint::zero(delta(a, b))}),
               ShapeMismatch);
}

TEST(SicCube, EquivalentToSubsetFormOnCube) {
  const Oracle oracle;
  for (const auto& f : brute::all_tensors(Shape({2, 2, 2}))) {
    EXPECT_EQ(oracle.exact_rejection(f, TestKind::kSicSubsets).value(),
              oracle.exact_rejection(f, TestKind::kSicCube).value());
  }
}

TEST(Shapka, QuerySetsByParity) {
  const Point a2{0, 1}, b2{1, 0};
  EXPECT_EQ(sorted(shapka_queries(a2, b2)), sorted({b2, Point{1, 1}, Point{0, 0}, a2}));
  const Point a3{0, 1, 2}, b3{1, 0, 0};
  const auto q3 = shapka_queries(a3, b3);
  EXPECT_EQ(q3.size(), 4u);
  EXPECT_EQ(sorted(q3), sorted({b3, Point{1, 1, 2}, Point{0, 0, 2}, Point{0, 1, 0}}));
  const auto f = random_tensor(Shape({2, 2, 3}), 7);
  EXPECT_EQ(shapka_trial(f, ShapkaDraw{a3, b3}).queries, q3);
}

TEST(Shapka, OneFlipCorruptionHasBoundedRejection) {
  const Shape shape({2, 2, 2});
  const auto base = materialize(random_direct_sum(shape, 9));
  for (std::size_t off = 0; off < shape.size(); ++off) {
    const auto f = base.with_flipped(off);
    EXPECT_GE(brute::rejection(f, TestKind::kShapka), Rational(1, 8));
    EXPECT_EQ(Oracle().exact_rejection(f, TestKind::kShapka).value(), brute::rejection(f, TestKind::kShapka));
  }
}

TEST(Blr, AffineFunctionsAlwaysAccept) {
  for (std::size_t dim = 1; dim <= 4; ++dim) {
    const Shape cube = Shape::binary_cube(dim);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << dim); ++s) {
      for (bool c : {false, true}) {
        const auto g = AffineFunction{IndexSet(s), c}.materialize(cube);
        for (const auto& x : brute::all_points(cube)) {
          for (const auto& y : brute::all_points(cube)) ASSERT_TRUE(blr_affinity_trial(g, BlrDraw{x, y}).accepted);
        }
      }
    }
  }
}

TEST(Blr, ZeroQueryAlwaysAccepts) {
  const auto g = random_tensor(Shape::binary_cube(4), 3);
  const Point zero{0, 0, 0, 0};
  for (const auto& y : brute::all_points(g.shape())) EXPECT_TRUE(blr_affinity_trial(g, BlrDraw{zero, y}).accepted);
}

TEST(Blr, AndOnTwoBits) {
  const std::uint8_t table[] = {0, 0, 0, 1};
  const auto g = boolean_function(table);
  std::size_t rejecting = 0;
  for (const auto& x : brute::all_points(g.shape())) {
    for (const auto& y : brute::all_points(g.shape())) rejecting += blr_affinity_trial(g, BlrDraw{x, y}).accepted ? 0 : 1;
  }
  EXPECT_EQ(rejecting, 6u);
  EXPECT_EQ(Oracle().exact_rejection(g, TestKind::kBlr).value(), Rational(3, 8));
}

TEST(Blr, QueriesAndErrors) {
  const std::uint8_t table[] = {0, 1, 1, 0, 1, 0, 0, 1};
  const auto g = boolean_function(table);
  const auto out = blr_affinity_trial(g, BlrDraw{Point{1, 0, 1}, Point{1, 1, 0}});
  ASSERT_EQ(out.queries.size(), 4u);
  EXPECT_EQ(out.queries[0], (Point{0, 0, 0}));
  EXPECT_EQ(out.queries[3], (Point{0, 1, 1}));
  const std::uint8_t bad_len[] = {0, 1, 1};
  EXPECT_THROW(boolean_function(bad_len), std::invalid_argument);
  const auto not_cube = random_tensor(Shape({3, 2}), 1);
  EXPECT_THROW(blr_affinity_trial(not_cube, BlrDraw{Point{0, 0}, Point{1, 1}}), ShapeMismatch);
}

TEST(Conjectured, DegenerateCubePointsAccept) {
  const Shape shape({3, 3, 2});
  const auto f = random_tensor(shape, 4);
  for (const auto& a : brute::all_points(shape)) {
    for (const auto& b : brute::all_points(shape)) {
      const IndexSet cube = delta(a, b);
      EXPECT_TRUE(conjectured_trial(f, ConjecturedDraw{a, b, CubePoint::zero(cube)}).accepted);
      EXPECT_TRUE(conjectured_trial(f, ConjecturedDraw{a, b, CubePoint::all_ones(cube)}).accepted);
    }
  }
}

TEST(Oracle, ExactRejectionMatchesDefinitionOnRandomTensors) {
  const Oracle oracle;
  for (const auto& shape : {Shape({2, 2}), Shape({3, 2}), Shape({2, 3, 2}), Shape({3, 3, 3})}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto f = random_tensor(shape, seed);
      for (auto kind : kTensorTests) {
        EXPECT_EQ(oracle.exact_rejection(f, kind).value(), brute::rejection(f, kind))
            << to_string(kind) << " " << shape.to_string();
      }
    }
  }
  for (std::size_t dim = 1; dim <= 4; ++dim) {
    const auto g = random_tensor(Shape::binary_cube(dim), dim);
    EXPECT_EQ(oracle.exact_rejection(g, TestKind::kBlr).value(), brute::rejection(g, TestKind::kBlr));
  }
}

TEST(Symmetry, RejectionInvariantUnderReindexAndFlip) {
  const Oracle oracle;
  const Shape shape({3, 2, 2});
  const std::vector<Permutation> perms = {{2, 0, 1}, {1, 0}, {0, 1}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = random_tensor(shape, 50 + seed);
    for (auto kind : kTensorTests) {
      const auto base = oracle.exact_rejection(f, kind).value();
      EXPECT_EQ(oracle.exact_rejection(reindex(f, perms), kind).value(), base);
      EXPECT_EQ(oracle.exact_rejection(flip(f), kind).value(), base);
    }
  }
}

TEST(Sampling, DeterministicInSeed) {
  const Shape shape({3, 4, 5});
  for (auto kind : kTensorTests) {
    Rng r1(42), r2(42);
    for (int i = 0; i < 100; ++i) {
      const auto f = random_tensor(shape, 1);
      EXPECT_EQ(run_trial(f, sample_randomness(kind, shape, r1)).queries,
                run_trial(f, sample_randomness(kind, shape, r2)).queries);
    }
  }
}

TEST(Sampling, DeltaSizeIsBinomial) {
  const Shape shape({2, 2});
  Rng rng(1);
  const int n = 100000;
  std::array<int, 3> hist{};
  for (int i = 0; i < n; ++i) {
    const auto r = std::get<ShapkaDraw>(sample_randomness(TestKind::kShapka, shape, rng));
    ++hist[delta(r.a, r.b).size()];
  }
  const double p[] = {0.25, 0.5, 0.25};
  for (int k = 0; k < 3; ++k) {
    const double sigma = std::sqrt(n * p[k] * (1 - p[k]));
    EXPECT_NEAR(hist[k], n * p[k], 3 * sigma);
  }
}

TEST(Sampling, SubsetInclusionIsHalf) {
  const Shape shape({3, 3, 3, 3});
  Rng rng(2);
  const int n = 100000;
  std::array<int, 4> s_hits{}, t_hits{};
  for (int i = 0; i < n; ++i) {
    const auto r = std::get<SicSubsetsDraw>(sample_randomness(TestKind::kSicSubsets, shape, rng));
    for (std::size_t j = 0; j < 4; ++j) {
      s_hits[j] += r.s.contains(j) ? 1 : 0;
      t_hits[j] += r.t.contains(j) ? 1 : 0;
    }
  }
  const double sigma = std::sqrt(n * 0.25);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(s_hits[j], n / 2.0, 3 * sigma);
    EXPECT_NEAR(t_hits[j], n / 2.0, 3 * sigma);
  }
}

TEST(Sampling, CubePointsRespectMasks) {
  const Shape shape({2, 3, 4});
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto c = std::get<SicCubeDraw>(sample_randomness(TestKind::kSicCube, shape, rng));
    EXPECT_EQ(c.x.mask(), delta(c.a, c.b));
    EXPECT_EQ(c.y.mask(), delta(c.a, c.b));
    const auto j = std::get<ConjecturedDraw>(sample_randomness(TestKind::kConjectured, shape, rng));
    EXPECT_EQ(j.x.mask(), delta(j.a, j.b));
  }
  EXPECT_THROW(sample_randomness(TestKind::kBlr, shape, rng), ShapeMismatch);
}

TEST(QueryBudget, NeverExceeded) {
  for (const auto& shape : {Shape({2, 2}), Shape({3, 2, 2}), Shape({2, 2, 2, 2}), Shape({2, 3, 2, 3, 2})}) {
    const auto f = random_tensor(shape, 3);
    Rng rng(9);
    for (auto kind : kAllTestKinds) {
      if (kind == TestKind::kBlr && !shape.is_binary_cube()) continue;
      for (int i = 0; i < 200; ++i) {
        const auto r = sample_randomness(kind, shape, rng);
        EXPECT_EQ(kind_of(r), kind);
        const auto out = run_trial(f, r);
        EXPECT_LE(out.queries.size(), query_budget(kind, shape.rank()));
        if (kind == TestKind::kConjectured) {
          EXPECT_EQ(out.queries.size(), 4u);
        }
        if (kind == TestKind::kShapka) {
          EXPECT_EQ(out.queries.size(), shape.rank() + (shape.rank() % 2 == 0 ? 2 : 1));
        }
        EXPECT_EQ(trial_accepts(f, r), out.accepted);
      }
    }
  }
}
