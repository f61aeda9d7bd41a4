#include <random>

#include <gtest/gtest.h>

#include "bmatch/core.hpp"
#include "reference.hpp"

namespace bmatch {
namespace {

using testing::make_instance;

TEST(ValidateInstance, MinimalInstanceIsOk) {
  EXPECT_TRUE(validate_instance(make_instance({1}, {1}, {{5}})).ok());
}

TEST(ValidateInstance, TooManyLeftVerticesIsInfeasible) {
  const auto report = validate_instance(make_instance({1, 1}, {1}, {{0}, {0}}));
  EXPECT_EQ(report.code, ValidationCode::Infeasible);
  EXPECT_EQ(report.overflow, Side::Left);
}

TEST(ValidateInstance, TooManyRightVerticesIsInfeasible) {
  const auto report = validate_instance(make_instance({1}, {1, 1}, {{0, 0}}));
  EXPECT_EQ(report.code, ValidationCode::Infeasible);
  EXPECT_EQ(report.overflow, Side::Right);
}

TEST(ValidateInstance, ZeroCapacity) {
  EXPECT_EQ(validate_instance(make_instance({0}, {1}, {{1}})).code,
            ValidationCode::NonPositiveCapacity);
  EXPECT_EQ(validate_instance(make_instance({1}, {-2}, {{1}})).code,
            ValidationCode::NonPositiveCapacity);
}

TEST(ValidateInstance, ShapeMismatch) {
  auto inst = make_instance({1}, {1}, {{1}});
  inst.weights = Matrix(1, 2);
  EXPECT_EQ(validate_instance(inst).code, ValidationCode::ShapeMismatch);
  inst = make_instance({1}, {1}, {{1}});
  inst.alpha.push_back(1);
  EXPECT_EQ(validate_instance(inst).code, ValidationCode::ShapeMismatch);
}

TEST(ValidateInstance, NonFiniteWeight) {
  auto inst = make_instance({1}, {1}, {{1}});
  inst.weights(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(validate_instance(inst).code, ValidationCode::NonFiniteWeight);
  inst.weights(0, 0) = std::nan("");
  EXPECT_EQ(validate_instance(inst).code, ValidationCode::NonFiniteWeight);
}

TEST(Expand, UnitCapacitiesGiveTheOriginalGraph) {
  const auto g =
      expand(make_instance({1, 1, 1}, {1, 1, 1}, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}));
  EXPECT_EQ(g.p(), 3u);
  EXPECT_EQ(g.q(), 3u);
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      EXPECT_EQ(g.weight(x, y), static_cast<double>(3 * x + y + 1));
    }
  }
}

TEST(Expand, LeftCopiesInheritTheirRow) {
  const auto g = expand(make_instance({2}, {1, 1}, {{5, 3}}));
  EXPECT_EQ(g.p(), 2u);
  EXPECT_EQ(g.q(), 2u);
  EXPECT_EQ(g.left_owners(), (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(g.weight(1, 0), 5);
  EXPECT_EQ(g.weight(1, 1), 3);
  EXPECT_TRUE(g.is_original(Side::Left, 0));
  EXPECT_FALSE(g.is_original(Side::Left, 1));
}

TEST(Expand, RightCopiesInheritTheirColumn) {
  const auto g = expand(make_instance({1}, {3}, {{7}}));
  EXPECT_EQ(g.q(), 3u);
  for (std::size_t y = 0; y < 3; ++y) {
    EXPECT_EQ(g.right_owner(y), 0u);
    EXPECT_EQ(g.weight(0, y), 7);
  }
}

TEST(Expand, RejectsInvalidInstances) {
  EXPECT_THROW(expand(make_instance({1, 1}, {1}, {{0}, {0}})), InvalidInstance);
}

TEST(Expand, GroupsAreContiguousAndWeightsReplicated) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    const auto inst = testing::random_small(rng, 5, 5, 4);
    const auto g = expand(inst);
    std::size_t next = 0;
    for (std::size_t i = 0; i < inst.s; ++i) {
      const Block& b = g.left_groups()[i];
      ASSERT_EQ(b.first, next);
      ASSERT_EQ(b.size, static_cast<std::size_t>(inst.alpha[i]));
      for (std::size_t x = b.first; x < b.end(); ++x) {
        ASSERT_EQ(g.left_owner(x), i);
        for (std::size_t y = 0; y < g.q(); ++y) {
          ASSERT_EQ(g.weight(x, y), g.weight(b.first, y));
        }
      }
      next = b.end();
    }
    ASSERT_EQ(next, g.p());
    next = 0;
    for (std::size_t j = 0; j < inst.t; ++j) {
      const Block& b = g.right_groups()[j];
      ASSERT_EQ(b.first, next);
      for (std::size_t y = b.first; y < b.end(); ++y) {
        ASSERT_EQ(g.right_owner(y), j);
        for (std::size_t x = 0; x < g.p(); ++x) {
          ASSERT_EQ(g.weight(x, y), g.weight(x, b.first));
        }
      }
      next = b.end();
    }
    ASSERT_EQ(next, g.q());
  }
}

TEST(Collapse, EmptyMatching) {
  const auto g = expand(make_instance({2}, {1, 1}, {{5, 3}}));
  const auto bm = collapse(g, MatchingState(g));
  EXPECT_TRUE(bm.edges.empty());
  EXPECT_EQ(bm.total_weight, 0.0);
}

TEST(Collapse, ProjectsOntoOwners) {
  const auto g = expand(make_instance({2}, {1, 1}, {{5, 3}}));
  MatchingState m(g);
  m.match(0, 0);
  m.match(1, 1);
  const auto bm = collapse(g, m);
  EXPECT_EQ(bm.edges, (std::vector<BMatchEdge>{{0, 0, 1}, {0, 1, 1}}));
  EXPECT_EQ(bm.total_weight, 8.0);
}

TEST(Collapse, DuplicatePairsBecomeMultiplicity) {
  const auto g = expand(make_instance({2}, {2}, {{5}}));
  MatchingState m(g);
  m.match(0, 0);
  m.match(1, 1);
  const auto bm = collapse(g, m);
  EXPECT_EQ(bm.edges, (std::vector<BMatchEdge>{{0, 0, 2}}));
  EXPECT_EQ(bm.total_weight, 10.0);
}

TEST(Collapse, InconsistentPartnerMaps) {
  const auto g = expand(make_instance({2}, {2}, {{5}}));
  MatchingState m(g);
  m.set_partner(Side::Left, 0, 1);
  EXPECT_THROW(collapse(g, m), InconsistentMatching);
}

TEST(Collapse, RandomMatchingsRespectUpperBounds) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 300; ++iter) {
    const auto inst = testing::random_small(rng, 5, 5, 3);
    const auto g = expand(inst);
    MatchingState m(g);
    std::vector<std::size_t> ys(g.q());
    std::iota(ys.begin(), ys.end(), std::size_t{0});
    std::shuffle(ys.begin(), ys.end(), rng);
    std::bernoulli_distribution coin(0.6);
    for (std::size_t x = 0; x < g.p() && x < ys.size(); ++x) {
      if (coin(rng)) m.match(x, ys[x]);
    }
    const auto bm = collapse(g, m);
    const auto report = verify_b_matching(inst, bm, 1e-9);

    // Upper bounds and the weight always hold; only the lower bound may fail,
    // and exactly when some original owner has no matched vertex in its group.
    bool every_owner_covered = true;
    for (Side side : {Side::Left, Side::Right}) {
      for (const Block& b : g.groups(side)) {
        bool covered = false;
        for (std::size_t v = b.first; v < b.end(); ++v) {
          covered = covered || !m.is_free(side, v);
        }
        every_owner_covered = every_owner_covered && covered;
      }
    }
    EXPECT_EQ(report.ok, every_owner_covered) << report.violation;
    if (!report.ok) {
      EXPECT_NE(report.violation.find("degree 0 < 1"), std::string::npos)
          << report.violation;
    }
  }
}

class VerifyForced : public ::testing::Test {
 protected:
  BMatchInstance inst = make_instance({2}, {1, 1}, {{5, 3}});
};

TEST_F(VerifyForced, OnlyFeasibleMatchingPasses) {
  EXPECT_TRUE(verify_b_matching(inst, {{{0, 0, 1}, {0, 1, 1}}, 8.0}, 1e-9).ok);
}

TEST_F(VerifyForced, UncoveredRightVertex) {
  const auto r = verify_b_matching(inst, {{{0, 0, 1}}, 5.0}, 1e-9);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violation, "right vertex 1 has degree 0 < 1");
}

TEST_F(VerifyForced, WeightMismatch) {
  const auto r = verify_b_matching(inst, {{{0, 0, 1}, {0, 1, 1}}, 9.0}, 1e-9);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violation, "weight mismatch: stated 9, recomputed 8");
}

TEST_F(VerifyForced, MultiplicityAboveMinCapacity) {
  const auto r = verify_b_matching(inst, {{{0, 0, 2}, {0, 1, 1}}, 13.0}, 1e-9);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.violation.find("exceeds min capacity"), std::string::npos);
}

TEST_F(VerifyForced, DuplicatePairAndRange) {
  EXPECT_FALSE(
      verify_b_matching(inst, {{{0, 0, 1}, {0, 0, 1}, {0, 1, 1}}, 13.0}, 1e-9).ok);
  EXPECT_FALSE(verify_b_matching(inst, {{{0, 2, 1}}, 0.0}, 1e-9).ok);
  EXPECT_FALSE(verify_b_matching(inst, {{{0, 0, 0}, {0, 1, 1}}, 3.0}, 1e-9).ok);
}

TEST(GenerateInstance, DegenerateRangesForceTheOutput) {
  const auto inst = generate_instance(1, 1, 1, 0, 0, true, 12345);
  EXPECT_EQ(inst, make_instance({1}, {1}, {{0}}));
}

TEST(GenerateInstance, SameSeedSameInstance) {
  EXPECT_EQ(generate_instance(4, 3, 3, -9, 9, true, 77),
            generate_instance(4, 3, 3, -9, 9, true, 77));
  EXPECT_EQ(generate_instance(4, 3, 3, -1.5, 2.5, false, 77),
            generate_instance(4, 3, 3, -1.5, 2.5, false, 77));
}

TEST(GenerateInstance, RepairsRightCapacity) {
  const auto inst = generate_instance(3, 1, 1, -9, 9, true, 3);
  EXPECT_EQ(inst.beta, (std::vector<Capacity>{3}));
  EXPECT_EQ(inst.alpha, (std::vector<Capacity>{1, 1, 1}));
}

TEST(GenerateInstance, BadRanges) {
  EXPECT_THROW(generate_instance(0, 1, 1, 0, 1, true, 0), BadRange);
  EXPECT_THROW(generate_instance(1, 1, 0, 0, 1, true, 0), BadRange);
  EXPECT_THROW(generate_instance(1, 1, 1, 2, 1, true, 0), BadRange);
  EXPECT_THROW(generate_instance(1, 1, 1, 0.2, 0.8, true, 0), BadRange);
}

TEST(GenerateInstance, AlwaysValidAndWithinRanges) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_int_distribution<Capacity> cap(1, 5);
  for (int iter = 0; iter < 500; ++iter) {
    const bool integer = iter % 2 == 0;
    const auto inst =
        generate_instance(size(rng), size(rng), cap(rng), -20, 20, integer, rng());
    ASSERT_TRUE(validate_instance(inst).ok()) << validate_instance(inst).message();
    for (std::size_t i = 0; i < inst.s; ++i) {
      for (std::size_t j = 0; j < inst.t; ++j) {
        const double w = inst.weights(i, j);
        ASSERT_GE(w, -20);
        ASSERT_LE(w, 20);
        if (integer) {
          ASSERT_EQ(w, std::round(w));
        }
      }
    }
  }
}

}  // namespace
}  // namespace bmatch
