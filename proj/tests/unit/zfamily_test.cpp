#include <gtest/gtest.h>

#include "gordankit/zfamily.hpp"

using namespace gordankit;

namespace {

QuadraticFunction scalar_q(double a, double b, double c) { return {SymMatrix::from_rows({{a}}), {b}, c}; }

}  // namespace

TEST(Bordered, Examples) {
  EXPECT_EQ(bordered(scalar_q(1, 0, 0)), SymMatrix::from_rows({{1, 0}, {0, 0}}));
  EXPECT_EQ(bordered(scalar_q(0, -1, 1)), SymMatrix::from_rows({{0, -1}, {-1, 2}}));
  EXPECT_EQ(bordered(scalar_q(0, 1, 0)), SymMatrix::from_rows({{0, 1}, {1, 0}}));
}

TEST(Bordered, ReproducesTheQuadraticOnLiftedPoints) {
  CounterRng rng(91, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(4);
    const QuadraticFunction q(random_symmetric(n, rng), random_vector(n, rng, -2, 2), rng.uniform(-2, 2));
    Vector x = random_vector(n, rng, -3, 3);
    const double direct = eval_quadratic(q, x);
    x.push_back(1.0);
    EXPECT_NEAR(0.5 * bordered(q).quadratic_form(x), direct, 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST(IsZMatrix, Examples) {
  EXPECT_TRUE(is_z_matrix(SymMatrix::from_rows({{1, 0}, {0, 0}})).ok);
  EXPECT_TRUE(is_z_matrix(SymMatrix::from_rows({{0, -1}, {-1, 2}})).ok);
  const ZCheck bad = is_z_matrix(SymMatrix::from_rows({{0, 1}, {1, 0}}));
  EXPECT_FALSE(bad.ok);
  ASSERT_EQ(bad.offenders.size(), 1u);
  EXPECT_EQ(bad.offenders[0].k, 0u);
  EXPECT_EQ(bad.offenders[0].l, 1u);
  EXPECT_EQ(bad.offenders[0].value, 1.0);
}

TEST(IsZMatrix, Tolerance) {
  const SymMatrix m = SymMatrix::from_rows({{0, 1e-12}, {1e-12, 0}});
  EXPECT_FALSE(is_z_matrix(m).ok);
  EXPECT_TRUE(is_z_matrix(m, 1e-9).ok);
}

TEST(AggregationPoint, Examples) {
  const Vector x0 = aggregation_point({{1.0, 0.0}, {0.0, 1.0}}, SimplexWeight::uniform(2));
  EXPECT_NEAR(x0[0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(x0[1], std::sqrt(0.5), 1e-15);

  const Vector single = aggregation_point({{0.5, 2.0}}, SimplexWeight::vertex(1, 0));
  EXPECT_EQ(single, (Vector{0.5, 2.0}));

  EXPECT_EQ(aggregation_point({{-1.0}, {1.0}}, SimplexWeight::uniform(2)), (Vector{1.0}));
}

TEST(VerifyAggregation, Examples) {
  const auto sq = verify_aggregation_inequality(QuadraticFamily({scalar_q(1, 0, 0)}), {{-1.0}, {1.0}},
                                                SimplexWeight::uniform(2));
  EXPECT_TRUE(sq.ok);
  EXPECT_EQ(sq.worst_gap, 0.0);

  const auto lin = verify_aggregation_inequality(QuadraticFamily({scalar_q(0, -1, 0)}), {{1.0}, {4.0}},
                                                 SimplexWeight::uniform(2));
  EXPECT_TRUE(lin.ok);
  EXPECT_DOUBLE_EQ(lin.x0[0], std::sqrt(8.5));
  EXPECT_EQ(lin.worst_gap, 0.0);
}

TEST(VerifyAggregation, RejectsNonZFamily) {
  try {
    verify_aggregation_inequality(QuadraticFamily({scalar_q(0, 1, 0)}), {{1.0}}, SimplexWeight::vertex(1, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::precondition);
  }
}

TEST(VerifyAggregation, RandomZFamiliesWithSignedPoints) {
  CounterRng rng(93, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.index(4);
    const std::size_t m = 1 + rng.index(4);
    const QuadraticFamily fam = random_z_family(n, 1 + rng.index(3), 1000 + trial);
    std::vector<Vector> pts(m);
    for (auto& p : pts) p = random_vector(n, rng, -3, 3);
    Vector t(m);
    double s = 0.0;
    for (double& v : t) s += (v = rng.uniform(0.01, 1.0));
    for (double& v : t) v /= s;
    const auto r = verify_aggregation_inequality(fam, pts, SimplexWeight::make(t));
    ASSERT_TRUE(r.ok) << "trial " << trial << " gap " << r.worst_gap;
    for (std::size_t k = 0; k < n; ++k) {
      double avg = 0.0;
      for (std::size_t j = 0; j < m; ++j) avg += t[j] * pts[j][k];
      EXPECT_LE(std::abs(avg), r.x0[k] + 1e-12);
    }
  }
}

TEST(InfsupFalsify, OppositeSlopesOnTwoPoints) {
  const QuadraticFamily fam({scalar_q(0, 1, 0), scalar_q(0, -1, 0)});
  const auto rep = infsup_falsify(fam, Domain::points({{-1.0}, {1.0}}), EngineConfig{});
  EXPECT_EQ(rep.status, InfsupStatus::violation_found);
  EXPECT_TRUE(rep.inf_sup_exact);
  EXPECT_EQ(rep.inf_sup, 1.0);
  ASSERT_TRUE(rep.violation);
  EXPECT_EQ(rep.violation->lhs, 1.0);
  EXPECT_EQ(rep.violation->rhs, 0.0);
  EXPECT_EQ(rep.violation->t[0], 0.5);
  EXPECT_EQ(rep.violation->points[0], (Vector{-1.0}));
  EXPECT_EQ(rep.violation->points[1], (Vector{1.0}));
}

TEST(InfsupFalsify, SingleMemberNeverViolates) {
  CounterRng rng(95, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const QuadraticFamily fam({QuadraticFunction(random_symmetric(2, rng), random_vector(2, rng, -1, 1), 0.0)});
    const auto rep = infsup_falsify(fam, Domain::points({{0.0, 1.0}, {1.0, -1.0}, {2.0, 0.5}}), EngineConfig{});
    EXPECT_EQ(rep.status, InfsupStatus::verified_on_samples);
  }
}

TEST(InfsupFalsify, ZFamilyOnOrthant) {
  for (Seed s = 0; s < 10; ++s) {
    const QuadraticFamily fam = random_z_family(2, 3, s);
    EngineConfig cfg;
    cfg.falsify_samples = 200;
    const auto rep = infsup_falsify(fam, Domain::nonneg_orthant(2), cfg);
    EXPECT_EQ(rep.status, InfsupStatus::verified_on_samples) << "seed " << s;
  }
}
