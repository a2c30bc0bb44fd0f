#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace kforge;
using namespace kforge_test;

TEST(Builders, TorusShapesAndNames) {
  auto t = build_torus_constant_dgla(2, 2);
  const auto& s = t.dgla.space();
  EXPECT_EQ(s.dims, (std::vector<std::size_t>{4, 8, 4}));
  EXPECT_EQ(s.name(0, 1), "E12");
  EXPECT_EQ(s.name(1, 4), "E11.e2");
  EXPECT_EQ(s.name(2, 3), "E22.e12");
  EXPECT_TRUE(t.dgla.differential().is_zero());
  EXPECT_EQ(build_torus_constant_dgla(1, 3).dgla.space().dims, (std::vector<std::size_t>{9, 9}));
  EXPECT_THROW(build_torus_constant_dgla(3, 2), ResourceError);
  EXPECT_THROW(build_torus_constant_dgla(2, 5), ResourceError);
  EXPECT_THROW(build_torus_constant_dgla(0, 2), InputError);
}

TEST(Builders, HalfBracketIsWedgeSquareOracle) {
  // α∧α = ½[α, α] for degree-1 α, with α∧α computed from the matrices.
  std::mt19937_64 rng(seed() + 60);
  for (int r : {1, 2, 3}) {
    auto t = build_torus_constant_dgla(2, r);
    const auto& L = t.dgla;
    for (int n = 0; n < 10; ++n) {
      auto a = random_homogeneous(L.space(), 1, rng);
      const Matrix wedge = wedge_square_2torus(a.part(1), r);
      const GradedElement half = L.bracket(a, a) * Scalar::rational(1, 2);
      EXPECT_EQ(torus_block(half.part(2), 0, r), wedge);
    }
  }
}

TEST(Builders, DegreeZeroBracketIsCommutator) {
  std::mt19937_64 rng(seed() + 61);
  auto t = build_torus_constant_dgla(2, 3);
  const auto& L = t.dgla;
  for (int n = 0; n < 10; ++n) {
    auto a = random_homogeneous(L.space(), 0, rng);
    auto b = random_homogeneous(L.space(), 1, rng);
    const Matrix x = torus_block(a.part(0), 0, 3);
    auto br = L.bracket(a, b);
    for (std::size_t slot = 0; slot < 2; ++slot) {
      const Matrix y = torus_block(b.part(1), slot, 3);
      EXPECT_EQ(torus_block(br.part(1), slot, 3), x * y - y * x);
    }
  }
}

TEST(Builders, TwistedBettiMatchesLatticeCount) {
  const std::vector<Scalar> twists = {Scalar(0), Scalar::rational(1, 2), Scalar(mpq_class(1), mpq_class(1)),
                                      Scalar(mpq_class(-2), mpq_class(1))};
  for (int M = 0; M <= 4; ++M)
    for (const auto& c : twists) {
      auto tw = build_twisted_dolbeault(M, c);
      const auto betti = betti_numbers(tw.dgla);
      const std::size_t count = twisted_lattice_count(M, c);
      EXPECT_EQ(betti[0], count);
      EXPECT_EQ(betti[1], count);
      EXPECT_TRUE(validate_dgla(tw.dgla).passed());
    }
  auto one = build_twisted_dolbeault(0, Scalar(0));
  EXPECT_EQ(betti_numbers(one.dgla), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(build_twisted_dolbeault(2, Scalar(0)).dgla.space().name(0, 0), "f[-2,-2]");
  EXPECT_THROW(build_twisted_dolbeault(9, Scalar(0)), ResourceError);
  EXPECT_THROW(build_twisted_dolbeault(-1, Scalar(0)), InputError);
}

TEST(Builders, TwistedSymbol) {
  auto tw = build_twisted_dolbeault(1, Scalar::rational(1, 2));
  const Matrix& d = tw.dgla.differential().block(0);
  // mode index (m1 + 1) * 3 + (m2 + 1); entry m1 + i m2 + c
  EXPECT_EQ(d(0, 0), Scalar(mpq_class(-1, 2), mpq_class(-1)));
  EXPECT_EQ(d(5, 5), Scalar(mpq_class(1, 2), mpq_class(1)));
  EXPECT_EQ(d(4, 4), Scalar::rational(1, 2));
}

TEST(Builders, FormSwapAction) {
  auto t = build_torus_constant_dgla(2, 2);
  auto swap = build_form_swap_action(2);
  EXPECT_TRUE(validate_action(t.dgla, t.metric, swap).passed());
}
