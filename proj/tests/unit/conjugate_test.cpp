#include <gtest/gtest.h>

#include "gordankit/conjugate.hpp"

using namespace gordankit;

namespace {

QuadraticFunction scalar_q(double a, double b, double c) { return {SymMatrix::from_rows({{a}}), {b}, c}; }

}  // namespace

TEST(ConjugateQuadratic, Examples) {
  const auto self = conjugate_quadratic(scalar_q(1, 0, 0), Vector{1.0});
  ASSERT_TRUE(self.finite());
  EXPECT_DOUBLE_EQ(self.value, 0.5);
  EXPECT_DOUBLE_EQ((*self.witness)[0], 1.0);

  const auto lin = conjugate_quadratic(scalar_q(0, 1, 0), Vector{1.0});
  ASSERT_TRUE(lin.finite());
  EXPECT_EQ(lin.value, 0.0);
  EXPECT_TRUE(conjugate_quadratic(scalar_q(0, 1, 0), Vector{0.0}).infinite);

  const auto shifted = conjugate_quadratic(scalar_q(1, 1, 0), Vector{3.0});
  EXPECT_DOUBLE_EQ(shifted.value, 2.0);
}

TEST(ConjugateQuadratic, FenchelYoungOnRandomConvex) {
  CounterRng rng(111, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(3);
    SymMatrix a = random_psd(n, rng);
    a.add_scaled(SymMatrix::identity(n), 0.1);
    const QuadraticFunction q(a, random_vector(n, rng, -1, 1), rng.uniform(-1, 1));
    const Vector y = random_vector(n, rng, -2, 2);
    const auto v = conjugate_quadratic(q, y);
    ASSERT_TRUE(v.finite());
    // q*(y) >= y.x - q(x) everywhere, with equality at the witness.
    EXPECT_NEAR(v.value, dot(y, *v.witness) - eval_quadratic(q, *v.witness), 1e-9 * (1.0 + std::abs(v.value)));
    for (int s = 0; s < 20; ++s) {
      const Vector x = random_vector(n, rng, -3, 3);
      EXPECT_GE(v.value, dot(y, x) - eval_quadratic(q, x) - 1e-9);
    }
  }
}

TEST(ConjugateValue, Ordering) {
  ConjugateValue a;
  a.value = 3.0;
  EXPECT_TRUE(a < ConjugateValue::plus_infinity());
  EXPECT_FALSE(ConjugateValue::plus_infinity() < a);
}

TEST(ConjugateSupMin, Examples) {
  const EngineConfig cfg;
  const QuadraticFamily slopes({scalar_q(0, 1, 0), scalar_q(0, -1, 0)});
  const auto a = conjugate_sup_min(slopes, Vector{0.0}, cfg);
  ASSERT_TRUE(a.value.finite());
  EXPECT_EQ(a.value.value, 0.0);
  EXPECT_NEAR(a.t[0], 0.5, 1e-12);

  const auto b = conjugate_sup_min(slopes, Vector{0.5}, cfg);
  ASSERT_TRUE(b.value.finite());
  EXPECT_NEAR(b.value.value, 0.0, 1e-12);
  EXPECT_NEAR(b.t[0], 0.75, 1e-12);

  const QuadraticFamily bowls({scalar_q(1, 0, 0), scalar_q(1, 0, -1)});
  const auto c = conjugate_sup_min(bowls, Vector{0.0}, cfg);
  EXPECT_EQ(c.value.value, 0.0);
  EXPECT_EQ(c.t[0], 1.0);
  EXPECT_EQ(c.hypothesis, ConjugateHypothesis::z_family_nonneg_y);
  EXPECT_EQ(conjugate_sup_min(bowls, Vector{-1.0}, cfg).hypothesis, ConjugateHypothesis::convex_family);
}

TEST(ConjugateSupMin, AllInfinite) {
  // Two positive slopes: no aggregate matches y = -1.
  const QuadraticFamily fam({scalar_q(0, 1, 0), scalar_q(0, 2, 0)});
  const auto r = conjugate_sup_min(fam, Vector{-1.0}, EngineConfig{});
  EXPECT_TRUE(r.value.infinite);
  EXPECT_EQ(r.infinite_count, r.lattice_size);
}

TEST(ConjugateHypothesis, Classification) {
  const QuadraticFamily z({scalar_q(1, -1, 0)});
  EXPECT_EQ(conjugate_hypothesis(z, Vector{1.0}), ConjugateHypothesis::z_family_nonneg_y);
  EXPECT_EQ(conjugate_hypothesis(z, Vector{-1.0}), ConjugateHypothesis::convex_family);
  EXPECT_EQ(conjugate_hypothesis(QuadraticFamily({scalar_q(-1, 1, 0)}), Vector{-1.0}), ConjugateHypothesis::none);
}

TEST(BruteConjugate, Examples) {
  const QuadraticFamily slopes({scalar_q(0, 1, 0), scalar_q(0, -1, 0)});
  EXPECT_NEAR(brute_conjugate_sup(slopes, Vector{0.0}, Box{{-2.0}, {2.0}}, 41).value, 0.0, 1e-12);

  const auto half = brute_conjugate_sup(QuadraticFamily({scalar_q(1, 0, 0)}), Vector{1.0}, Box{{-4.0}, {4.0}}, 41);
  EXPECT_NEAR(half.value, 0.5, 1e-12);
  EXPECT_NEAR(half.argmax[0], 1.0, 1e-6);
  EXPECT_FALSE(half.on_boundary);

  const QuadraticFamily bowls({scalar_q(1, 0, 0), scalar_q(1, 0, -1)});
  EXPECT_NEAR(brute_conjugate_sup(bowls, Vector{0.0}, Box{{-4.0}, {4.0}}, 41).value, 0.0, 1e-12);
}

TEST(BruteConjugate, BoxDoubling) {
  // y.x - x^2/2 with y = 12 peaks at x = 12, outside the default box.
  const auto r = brute_conjugate_sup(QuadraticFamily({scalar_q(1, 0, 0)}), Vector{12.0}, 65);
  EXPECT_NEAR(r.value, 72.0, 1e-9);
  EXPECT_GT(r.box.hi[0], 12.0);
  EXPECT_FALSE(r.on_boundary);
}

TEST(ConjugateFormula, MatchesBruteForceOnConvexFamilies) {
  CounterRng rng(121, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.index(2);
    std::vector<QuadraticFunction> members;
    for (int j = 0; j < 2; ++j) {
      SymMatrix a = random_psd(n, rng);
      a.add_scaled(SymMatrix::identity(n), 0.2);
      members.emplace_back(a, random_vector(n, rng, -1, 1), rng.uniform(-1, 1));
    }
    const QuadraticFamily fam(members);
    const Vector y = random_vector(n, rng, 0, 1);
    const auto formula = conjugate_sup_min(fam, y, EngineConfig{});
    const auto brute = brute_conjugate_sup(fam, y, n == 1 ? 2001 : 161);
    ASSERT_TRUE(formula.value.finite());
    EXPECT_NEAR(formula.value.value, brute.value, 1e-3) << "trial " << trial;
    EXPECT_LE(brute.value, formula.value.value + 1e-9);
  }
}
