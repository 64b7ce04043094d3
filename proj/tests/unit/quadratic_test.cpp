#include <gtest/gtest.h>

#include "gordankit/oracle.hpp"
#include "gordankit/quadratic.hpp"

using namespace gordankit;

namespace {

QuadraticFunction scalar_q(double a, double b, double c) { return {SymMatrix::from_rows({{a}}), {b}, c}; }

}  // namespace

TEST(EvalQuadratic, Examples) {
  EXPECT_DOUBLE_EQ(eval_quadratic(scalar_q(2, 0, 0), Vector{3.0}), 9.0);
  EXPECT_DOUBLE_EQ(eval_quadratic(scalar_q(0, 1, -1), Vector{1.0}), 0.0);
  const QuadraticFunction q(SymMatrix::identity(2), {-1.0, -1.0}, 2.0);
  EXPECT_DOUBLE_EQ(eval_quadratic(q, Vector{1.0, 1.0}), 1.0);
}

TEST(EvalQuadratic, DimensionMismatch) {
  try {
    eval_quadratic(scalar_q(1, 0, 0), Vector{1.0, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST(QuadraticFunction, RejectsBadInput) {
  EXPECT_THROW(QuadraticFunction(SymMatrix::identity(2), {1.0}, 0.0), Error);
  EXPECT_THROW(QuadraticFunction(SymMatrix::identity(1), {1.0}, std::numeric_limits<double>::infinity()), Error);
}

TEST(Aggregate, VertexReturnsMember) {
  const QuadraticFamily fam({scalar_q(1, 2, 3), scalar_q(4, 5, 6)});
  EXPECT_EQ(aggregate(fam, SimplexWeight::vertex(2, 0)), fam[0]);
}

TEST(Aggregate, CancellationGivesZero) {
  const QuadraticFamily fam({scalar_q(0, 1, 0), scalar_q(0, -1, 0)});
  const QuadraticFunction z = aggregate(fam, SimplexWeight::uniform(2));
  EXPECT_EQ(z.a(0, 0), 0.0);
  EXPECT_EQ(z.b[0], 0.0);
  EXPECT_EQ(z.c, 0.0);
}

TEST(Aggregate, ComponentwiseWeightedSum) {
  const QuadraticFamily fam({scalar_q(1, 0, 0), scalar_q(-1, 0, 0)});
  const QuadraticFunction q = aggregate(fam, SimplexWeight::make({0.75, 0.25}));
  EXPECT_DOUBLE_EQ(q.a(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(eval_quadratic(q, Vector{2.0}), 1.0);  // x^2 / 4
}

TEST(Aggregate, PointwiseLinearity) {
  CounterRng rng(99, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(5);
    const std::size_t m = 1 + rng.index(4);
    std::vector<QuadraticFunction> members;
    for (std::size_t j = 0; j < m; ++j)
      members.emplace_back(random_symmetric(n, rng), random_vector(n, rng, -3, 3), rng.uniform(-3, 3));
    const QuadraticFamily fam(members);
    Vector w(m);
    for (double& v : w) v = rng.uniform(0.0, 2.0);
    const ConeWeight u = ConeWeight::make(w);
    const Vector x = random_vector(n, rng, -2, 2);
    double direct = 0.0;
    for (std::size_t j = 0; j < m; ++j) direct += w[j] * eval_quadratic(fam[j], x);
    const double agg = eval_quadratic(aggregate(fam, u), x);
    ASSERT_NEAR(agg, direct, 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST(Aggregate, LengthMismatch) {
  const QuadraticFamily fam({scalar_q(1, 0, 0)});
  EXPECT_THROW(aggregate(fam, SimplexWeight::uniform(2)), Error);
}

TEST(QuadraticFamily, SupUsesLowestIndexOnTies) {
  const QuadraticFamily fam({scalar_q(0, 0, 1), scalar_q(0, 0, 2), scalar_q(0, 0, 2)});
  const auto [v, j] = fam.sup(Vector{0.0});
  EXPECT_EQ(v, 2.0);
  EXPECT_EQ(j, 1u);
}

TEST(QuadraticFamily, RejectsEmptyAndMixedDimensions) {
  EXPECT_THROW(QuadraticFamily(std::vector<QuadraticFunction>{}), Error);
  EXPECT_THROW(QuadraticFamily({scalar_q(1, 0, 0), QuadraticFunction(SymMatrix::identity(2), {0, 0}, 0)}), Error);
}

TEST(SimplexWeight, ClampsRoundingNoise) {
  const SimplexWeight w = SimplexWeight::make({-1e-12, 0.5, 0.5 + 1e-12});
  EXPECT_EQ(w[0], 0.0);
  double s = 0.0;
  for (double v : w.values()) s += v;
  EXPECT_NEAR(s, 1.0, 1e-15);
}

TEST(SimplexWeight, RejectsInvalid) {
  for (const Vector& t : {Vector{-0.1, 1.1}, Vector{0.5, 0.4}, Vector{}}) {
    try {
      SimplexWeight::make(t);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::invalid_weight);
    }
  }
}

TEST(ConeWeight, RejectsNegative) {
  EXPECT_THROW(ConeWeight::make({1.0, -0.5}), Error);
  EXPECT_EQ(ConeWeight::make({2.0, -1e-12})[1], 0.0);
}

TEST(Domain, ContainsAndProject) {
  const Domain o = Domain::nonneg_orthant(2);
  EXPECT_TRUE(o.contains(Vector{0.0, 1.0}));
  EXPECT_FALSE(o.contains(Vector{-0.1, 1.0}));
  EXPECT_EQ(o.project({-1.0, 2.0}), (Vector{0.0, 2.0}));

  const Domain s = Domain::unit_sphere(2);
  EXPECT_TRUE(s.contains(s.project({3.0, 4.0})));
  EXPECT_DOUBLE_EQ(s.project({3.0, 4.0})[0], 0.6);

  const Domain b = Domain::box({0.0, -1.0}, {1.0, 1.0});
  EXPECT_EQ(b.project({2.0, -3.0}), (Vector{1.0, -1.0}));

  const Domain p = Domain::points({{0.0}, {2.0}});
  EXPECT_EQ(p.project({1.0}), (Vector{0.0}));
  EXPECT_TRUE(p.contains(Vector{2.0}));
  EXPECT_FALSE(p.contains(Vector{1.0}));
}

TEST(Domain, Validation) {
  try {
    Domain::box({1.0}, {0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_domain);
  }
  EXPECT_THROW(Domain::points({}), Error);
  EXPECT_THROW(Domain::points({{0.0}, {0.0, 1.0}}), Error);
  EXPECT_THROW(Domain::reals(0), Error);
}
