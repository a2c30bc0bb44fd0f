#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace kforge;
using namespace kforge_test;

namespace {

struct Toy {
  BuiltToy built = build_toy3();
  HodgeData h = hodge_data(built.dgla, built.metric);
  const GradedSpace& space() const { return built.dgla.space(); }
  GradedElement x() const { return GradedElement::basis(space(), 1, 0); }
  GradedElement y() const { return GradedElement::basis(space(), 1, 1); }
  GradedElement u() const { return GradedElement::basis(space(), 2, 0); }
  GradedElement v() const { return GradedElement::basis(space(), 2, 1); }
};

}  // namespace

TEST(Kuranishi, Toy3HandRecursion) {
  // α₁ = t x; [α₁, α₁] = t² u; d*G u = y so α₂ = −½ t² y.
  // [α, α] = t² u − t³ v + ¼ t⁴ [y, y] = t² u − t³ v; ob = ½ P[α, α] = −½ t³ v.
  Toy toy;
  auto f = solve_kuranishi(toy.built.dgla, toy.h, 6);
  GradedSeries expected({"t"}, 6, GradedElement::zero(toy.space()));
  expected.add_term({1}, toy.x());
  expected.add_term({2}, toy.y() * Scalar::rational(-1, 2));
  EXPECT_EQ(f.alpha, expected);
  ASSERT_EQ(f.ideal_generators.size(), 1u);
  EXPECT_EQ(f.generator_indices[0], 0u);
  EXPECT_EQ(f.ideal_generators[0].terms().size(), 1u);
  EXPECT_EQ(f.ideal_generators[0].coefficient({3}), Scalar::rational(-1, 2));
  EXPECT_TRUE(verify_family(toy.built.dgla, toy.h, f).all());
}

TEST(Kuranishi, Toy3DirectSubstitutionOracle) {
  // Substitute α by hand into d α + ½[α, α] using explicit brackets.
  Toy toy;
  const auto& L = toy.built.dgla;
  auto f = solve_kuranishi(L, toy.h, 5);
  GradedSeries residual = mc_residual(L, f.alpha);
  // dα = −½ t² u; ½[α,α] = ½ t² u − ½ t³ v.
  GradedSeries expected = residual.empty_like();
  expected.add_term({3}, toy.v() * Scalar::rational(-1, 2));
  EXPECT_EQ(residual, expected);
  EXPECT_EQ(embed_obstruction(toy.space(), toy.h, f.obstruction), expected);
}

TEST(Kuranishi, KuranishiMapAndSliceByHand) {
  Toy toy;
  const auto& L = toy.built.dgla;
  GradedSeries tx({"t"}, 3, GradedElement::zero(toy.space()));
  tx.add_term({1}, toy.x());
  GradedSeries expected = tx;
  expected.add_term({2}, toy.y() * Scalar::rational(1, 2));
  EXPECT_EQ(kuranishi_map(L, toy.h, tx), expected);

  GradedSeries ty = tx.empty_like();
  ty.add_term({1}, toy.y());
  auto slice = slice_residual(L, toy.h, ty);
  EXPECT_TRUE(slice.harmonic.is_zero());
  EXPECT_TRUE(slice.coclosed.is_zero());
  EXPECT_EQ(slice.equation, ty);  // d*(t u) = t y
  EXPECT_FALSE(slice.in_slice());
  EXPECT_THROW(kuranishi_map(L, toy.h, mc_residual(L, tx)), InputError);
}

TEST(Kuranishi, OrderStability) {
  Toy toy;
  auto f3 = solve_kuranishi(toy.built.dgla, toy.h, 3);
  auto f8 = solve_kuranishi(toy.built.dgla, toy.h, 8);
  EXPECT_EQ(f8.alpha.up_to(3).terms(), f3.alpha.terms());
  EXPECT_EQ(f8.obstruction.up_to(3).terms(), f3.obstruction.terms());

  auto t = build_torus_constant_dgla(2, 2);
  auto h = hodge_data(t.dgla, t.metric);
  auto g2 = solve_kuranishi(t.dgla, h, 2);
  auto g4 = solve_kuranishi(t.dgla, h, 4);
  EXPECT_EQ(g4.obstruction.up_to(2).terms(), g2.obstruction.terms());
}

TEST(Kuranishi, RandomMetricsKeepIdentities) {
  std::mt19937_64 rng(seed() + 40);
  Toy toy;
  for (int k = 0; k < 5; ++k) {
    auto m = random_metric(toy.space(), rng);
    auto h = hodge_data(toy.built.dgla, m);
    auto f = solve_kuranishi(toy.built.dgla, h, 6);
    auto d = verify_family(toy.built.dgla, h, f);
    EXPECT_TRUE(d.all());
    // The germ is ⟨t³⟩ for every metric: a single generator starting at order 3.
    ASSERT_EQ(f.ideal_generators.size(), 1u);
    EXPECT_EQ(total_degree(f.ideal_generators[0].terms().begin()->first), 3);
  }
}

TEST(Kuranishi, RigidCaseIsTrivial) {
  const DgLa L = sl2_dual_numbers();
  auto h = hodge_data(L, MetricData::identity(L.space()));
  auto f = solve_kuranishi(L, h, 4);
  EXPECT_TRUE(f.trivial());
  EXPECT_TRUE(f.alpha.is_zero());
  EXPECT_FALSE(f.notices.empty());
  EXPECT_TRUE(verify_family(L, h, f).all());
}

TEST(Kuranishi, ParameterGuard) {
  auto t = build_torus_constant_dgla(2, 2);
  auto h = hodge_data(t.dgla, t.metric);
  SolveOptions tight;
  tight.max_parameters = 4;
  EXPECT_THROW(solve_kuranishi(t.dgla, h, 2, tight), ResourceError);
  tight.force = true;
  EXPECT_NO_THROW(solve_kuranishi(t.dgla, h, 2, tight));
  EXPECT_THROW(solve_kuranishi(t.dgla, h, 0), InputError);
}

TEST(Kuranishi, GaugeInverseAndMaurerCartan) {
  std::mt19937_64 rng(seed() + 41);
  const DgLa L = sl2_dual_numbers();
  const std::vector<std::string> params = {"t1", "t2"};
  for (int n = 0; n < 10; ++n) {
    auto xi = random_series(L.space(), 0, params, 4, rng);
    auto s = random_series(L.space(), 1, params, 4, rng);
    auto moved = gauge_transform(L, xi, s);
    EXPECT_EQ(gauge_transform(L, xi * Scalar(-1), moved), s);
    // Every degree-1 series is MC here, and must stay so.
    EXPECT_TRUE(mc_residual(L, moved).is_zero());
  }
  // Gauging zero by ξ gives −(exp(ad ξ) − 1)/ad ξ (dξ); to first order −dξ.
  GradedSeries xi(params, 1, GradedElement::zero(L.space()));
  xi.add_term({1, 0}, GradedElement::basis(L.space(), 0, 3));
  GradedSeries zero = xi.empty_like();
  GradedSeries expected = xi.empty_like();
  expected.add_term({1, 0}, GradedElement::basis(L.space(), 1, 0) * Scalar(-1));
  EXPECT_EQ(gauge_transform(L, xi, zero), expected);
}

TEST(Kuranishi, GaugeRejectsWrongDegrees) {
  Toy toy;
  GradedSeries s({"t"}, 2, GradedElement::zero(toy.space()));
  s.add_term({1}, toy.x());
  EXPECT_THROW(gauge_transform(toy.built.dgla, s, s), InputError);
}
