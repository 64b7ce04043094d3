#include <gtest/gtest.h>

#include "gordankit/infimum.hpp"
#include "test_oracles.hpp"

using namespace gordankit;
using gordankit::testing::grid_zoom_min;

namespace {

QuadraticFunction scalar_q(double a, double b, double c) { return {SymMatrix::from_rows({{a}}), {b}, c}; }

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

TEST(RealsInfimum, Examples) {
  const auto r = quadratic_infimum(scalar_q(1, 0, 0), Domain::reals(1));
  EXPECT_EQ(r.value, 0.0);
  ASSERT_TRUE(r.argmin);
  EXPECT_EQ((*r.argmin)[0], 0.0);

  const auto lin = quadratic_infimum(scalar_q(0, 1, 0), Domain::reals(1));
  EXPECT_EQ(lin.value, kNegInf);
  ASSERT_TRUE(lin.direction);
  EXPECT_LT((*lin.direction)[0], 0.0);

  EXPECT_EQ(quadratic_infimum(scalar_q(-1, 0, 0), Domain::reals(1)).value, kNegInf);
}

TEST(RealsInfimum, SingularPsdInAndOutOfRange) {
  const SymMatrix a = SymMatrix::from_rows({{1, 1}, {1, 1}});
  // b = (1, 1) lies in range(A): min of (x+y)^2/2 + (x+y) is -1/2.
  const auto in = quadratic_infimum(QuadraticFunction(a, {1, 1}, 0), Domain::reals(2));
  EXPECT_NEAR(in.value, -0.5, 1e-12);
  // b = (1, -1) is orthogonal to range(A).
  const auto out = quadratic_infimum(QuadraticFunction(a, {1, -1}, 0), Domain::reals(2));
  EXPECT_EQ(out.value, kNegInf);
  ASSERT_TRUE(out.direction);
  EXPECT_NEAR(a.quadratic_form(*out.direction), 0.0, 1e-12);
  EXPECT_LT(dot(*out.direction, Vector{1, -1}), 0.0);
}

TEST(RealsInfimum, MatchesNormalEquationsOnRandomPd) {
  CounterRng rng(3, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(5);
    const QuadraticFunction q(random_psd(n, rng), random_vector(n, rng, -2, 2), rng.uniform(-1, 1));
    const auto r = quadratic_infimum(q, Domain::reals(n));
    ASSERT_TRUE(r.argmin);
    // Gradient vanishes at the argmin and the value is attained there.
    EXPECT_LE(norm_inf(q.gradient(*r.argmin)), 1e-8);
    EXPECT_NEAR(eval_quadratic(q, *r.argmin), r.value, 1e-10 * (1.0 + std::abs(r.value)));
  }
}

TEST(OrthantInfimum, ParabolaVertex) {
  const auto r = quadratic_infimum(scalar_q(1, -2, 0), Domain::nonneg_orthant(1));
  EXPECT_NEAR(r.value, -2.0, 1e-14);
  EXPECT_NEAR((*r.argmin)[0], 2.0, 1e-14);
}

TEST(OrthantInfimum, LinearBoundedOnHalfLine) {
  // x on [0, inf) has minimum 0 although the free face is unbounded.
  const auto r = quadratic_infimum(scalar_q(0, 1, 0), Domain::nonneg_orthant(1));
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(quadratic_infimum(scalar_q(0, -1, 0), Domain::nonneg_orthant(1)).value, kNegInf);
}

TEST(OrthantInfimum, CopositivityAndRays) {
  // Not copositive: negative curvature along (1, 1).
  const SymMatrix not_copositive = SymMatrix::from_rows({{1, -2}, {-2, 1}});
  EXPECT_EQ(quadratic_infimum(QuadraticFunction(not_copositive, {5, 5}, 0), Domain::nonneg_orthant(2)).value, kNegInf);
  // Copositive, not PSD: bounded when b >= 0.
  const SymMatrix copositive = SymMatrix::from_rows({{0, 1}, {1, 0}});
  EXPECT_EQ(quadratic_infimum(QuadraticFunction(copositive, {1, 1}, 0.5), Domain::nonneg_orthant(2)).value, 0.5);
  // ... and unbounded along the zero-curvature ray e_1 when b_1 < 0.
  EXPECT_EQ(quadratic_infimum(QuadraticFunction(copositive, {-1, 1}, 0), Domain::nonneg_orthant(2)).value, kNegInf);
  // PSD with kernel (1, 1).
  const SymMatrix kernel = SymMatrix::from_rows({{1, -1}, {-1, 1}});
  EXPECT_EQ(quadratic_infimum(QuadraticFunction(kernel, {-1, -1}, 0), Domain::nonneg_orthant(2)).value, kNegInf);
  EXPECT_EQ(quadratic_infimum(QuadraticFunction(kernel, {1, 1}, 0), Domain::nonneg_orthant(2)).value, 0.0);
}

TEST(OrthantInfimum, CopositiveIndefiniteAgainstGrid) {
  // 1/2 (x^2 + 4xy + y^2) - x - y: best on an axis, value -1/2.
  const QuadraticFunction q(SymMatrix::from_rows({{1, 2}, {2, 1}}), {-1, -1}, 0);
  const auto r = quadratic_infimum(q, Domain::nonneg_orthant(2));
  const auto g = grid_zoom_min([&](std::span<const double> x) { return eval_quadratic(q, x); },
                               Box{{0, 0}, {4, 4}}, 81);
  EXPECT_NEAR(r.value, g.value, 1e-9);
  EXPECT_NEAR(r.value, -0.5, 1e-12);
}

TEST(OrthantInfimum, ConvexAgainstProjectedGradient) {
  CounterRng rng(17, 4);
  auto clip = [](Vector x) {
    for (double& v : x) v = std::max(v, 0.0);
    return x;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    SymMatrix a = random_psd(n, rng);
    a.add_scaled(SymMatrix::identity(n), 0.05);
    const QuadraticFunction q(a, random_vector(n, rng, -2, 2), rng.uniform(-1, 1));
    const auto r = quadratic_infimum(q, Domain::nonneg_orthant(n));
    const double oracle = gordankit::testing::projected_gradient_min(q, clip, 200000);
    ASSERT_NEAR(r.value, oracle, 1e-6) << "trial " << trial;
    ASSERT_FALSE(r.approximate);
  }
}

TEST(OrthantInfimum, TwoDimensionalNonconvexAgainstGrid) {
  CounterRng rng(23, 1);
  int bounded = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const QuadraticFunction q(random_symmetric(2, rng), random_vector(2, rng, -2, 2), 0.0);
    const auto r = quadratic_infimum(q, Domain::nonneg_orthant(2));
    auto f = [&](std::span<const double> x) { return eval_quadratic(q, x); };
    if (r.bounded()) {
      ++bounded;
      // The grid only sees feasible points, so it can never beat the exact value.
      const auto wide = grid_zoom_min(f, Box{{0, 0}, {60, 60}}, 121, 0);
      EXPECT_GE(wide.value, r.value - 1e-9);
      const double hi = 2.0 * (1.0 + norm_inf(*r.argmin));
      const auto g = grid_zoom_min(f, Box{{0, 0}, {hi, hi}}, 61);
      EXPECT_NEAR(g.value, r.value, 1e-6) << "trial " << trial;
    } else {
      ASSERT_TRUE(r.direction);
      const Vector& d = *r.direction;
      EXPECT_GE(std::min(d[0], d[1]), -1e-12);
      // Far along the witness ray the quadratic keeps decreasing.
      Vector far{1e4 * d[0], 1e4 * d[1]};
      Vector farther{1e5 * d[0], 1e5 * d[1]};
      EXPECT_LT(eval_quadratic(q, farther), eval_quadratic(q, far));
    }
  }
  EXPECT_GT(bounded, 5);
}

TEST(OrthantInfimum, Dominance) {
  CounterRng rng(29, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(4);
    const QuadraticFunction q(random_symmetric(n, rng), random_vector(n, rng, -2, 2), 0.0);
    const double reals = quadratic_infimum(q, Domain::reals(n)).value;
    const double orthant = quadratic_infimum(q, Domain::nonneg_orthant(n)).value;
    EXPECT_LE(reals, orthant);
    for (int s = 0; s < 50; ++s) EXPECT_LE(orthant, eval_quadratic(q, random_vector(n, rng, 0, 5)) + 1e-12);
  }
}

TEST(BoxInfimum, AgainstGrid) {
  CounterRng rng(31, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const QuadraticFunction q(random_symmetric(2, rng), random_vector(2, rng, -2, 2), 0.0);
    const Box box{{-1.0, -0.5}, {2.0, 1.5}};
    const auto r = quadratic_infimum(q, Domain::box(box.lo, box.hi));
    const auto g = grid_zoom_min([&](std::span<const double> x) { return eval_quadratic(q, x); }, box, 61);
    ASSERT_NEAR(r.value, g.value, 1e-6) << "trial " << trial;
    EXPECT_GE(g.value, r.value - 1e-12);
  }
}

TEST(BoxInfimum, DegenerateBox) {
  const auto r = quadratic_infimum(QuadraticFunction(SymMatrix::identity(2), {1, 0}, 0), Domain::box({1, 0}, {1, 2}));
  EXPECT_DOUBLE_EQ(r.value, 1.5);
}

TEST(SphereInfimum, HomogeneousIsHalfMinEigenvalue) {
  const std::vector<double> d{3.0, -2.0, 1.0};
  const auto r = quadratic_infimum(QuadraticFunction(SymMatrix::diagonal(d), {0, 0, 0}, 0.5), Domain::unit_sphere(3));
  EXPECT_DOUBLE_EQ(r.value, -1.0 + 0.5);
}

TEST(SphereInfimum, CircleAgainstAngleScan) {
  CounterRng rng(37, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const QuadraticFunction q(random_symmetric(2, rng), random_vector(2, rng, -1, 1), 0.0);
    const auto r = quadratic_infimum(q, Domain::unit_sphere(2));
    const double oracle = gordankit::testing::circle_min([&](std::span<const double> x) { return eval_quadratic(q, x); });
    ASSERT_NEAR(r.value, oracle, 1e-9) << "trial " << trial;
    EXPECT_NEAR(norm2(*r.argmin), 1.0, 1e-12);
  }
}

TEST(SphereInfimum, HardCase) {
  // b orthogonal to the bottom eigenvector, small enough for the hard case.
  const std::vector<double> d{-1.0, 1.0};
  const QuadraticFunction q(SymMatrix::diagonal(d), {0.0, 0.5}, 0.0);
  const auto r = quadratic_infimum(q, Domain::unit_sphere(2));
  const double oracle = gordankit::testing::circle_min([&](std::span<const double> x) { return eval_quadratic(q, x); });
  EXPECT_NEAR(r.value, oracle, 1e-12);
}

TEST(SphereInfimum, ThreeDimensionalAgainstSampling) {
  CounterRng rng(41, 8);
  for (int trial = 0; trial < 40; ++trial) {
    const QuadraticFunction q(random_symmetric(3, rng), random_vector(3, rng, -1, 1), 0.0);
    const auto r = quadratic_infimum(q, Domain::unit_sphere(3));
    const double oracle = gordankit::testing::sphere_min(
        [&](std::span<const double> x) { return eval_quadratic(q, x); },
        [&](std::span<const double> x) { return q.gradient(x); }, 3, 4000, 1000 + trial);
    EXPECT_LE(r.value, oracle + 1e-12);
    EXPECT_NEAR(r.value, oracle, 1e-8) << "trial " << trial;
  }
}

TEST(FinitePointInfimum, LowestIndexOnTies) {
  const auto r = quadratic_infimum(scalar_q(2, 0, 0), Domain::points({{2.0}, {-1.0}, {1.0}}));
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ((*r.argmin)[0], -1.0);
}

TEST(Infimum, DimensionMismatch) {
  EXPECT_THROW(quadratic_infimum(scalar_q(1, 0, 0), Domain::reals(2)), Error);
}
