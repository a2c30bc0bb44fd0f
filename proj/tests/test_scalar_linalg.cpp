#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace kforge;
using namespace kforge_test;

TEST(Scalar, GaussianArithmetic) {
  const Scalar i = Scalar::i();
  EXPECT_EQ(i * i, Scalar(-1));
  EXPECT_EQ((Scalar(1) + i) * (Scalar(1) - i), Scalar(2));
  EXPECT_EQ(Scalar(1) / (Scalar(1) + i), Scalar(mpq_class(1, 2), mpq_class(-1, 2)));
  EXPECT_EQ(Scalar::rational(2, 4), Scalar::rational(1, 2));
  EXPECT_EQ((Scalar(3) + i * Scalar(4)).norm(), mpq_class(25));
  EXPECT_THROW(Scalar(1) / Scalar(0), InputError);
}

TEST(Scalar, ParseAndPrint) {
  EXPECT_EQ(Scalar::parse("-3/6"), Scalar::rational(-1, 2));
  EXPECT_EQ(Scalar::parse("1", "2"), Scalar(mpq_class(1), mpq_class(2)));
  EXPECT_EQ(Scalar::parse("+7"), Scalar(7));
  EXPECT_THROW(Scalar::parse("1.5"), InputError);
  EXPECT_THROW(Scalar::parse("1/0"), InputError);
  EXPECT_THROW(Scalar::parse(""), InputError);
  EXPECT_EQ(rational_to_string(mpq_class(-6, 4)), "-3/2");
}

TEST(Scalar, FieldAxiomsOnRandomSamples) {
  std::mt19937_64 rng(seed());
  for (int n = 0; n < 200; ++n) {
    Scalar a = random_scalar(rng, 5), b = random_scalar(rng, 5), c = random_scalar(rng, 5);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
    if (!b.is_zero()) {
      EXPECT_EQ((a / b) * b, a);
    }
  }
}

TEST(Linalg, EchelonIsCanonical) {
  Matrix a = Matrix::from_rows({{0, 2, 4}, {1, 1, 1}, {2, 4, 6}});
  auto e = reduced_echelon(a);
  EXPECT_EQ(e.pivots, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(e.reduced, Matrix::from_rows({{1, 0, -1}, {0, 1, 2}, {0, 0, 0}}));
  EXPECT_EQ(rank(a), 2u);
}

TEST(Linalg, KernelSolveInverse) {
  Matrix a = Matrix::from_rows({{1, 2, 3}, {2, 4, 6}});
  auto k = kernel_basis(a);
  ASSERT_EQ(k.size(), 2u);
  for (const auto& v : k) EXPECT_TRUE((a * v).is_zero());
  // free coordinates are 1 in turn
  EXPECT_EQ(k[0], Vector({-2, 1, 0}));
  EXPECT_EQ(k[1], Vector({-3, 0, 1}));

  EXPECT_FALSE(solve_linear(a, Vector({1, 0})).has_value());
  auto x = solve_linear(a, Vector({2, 4}));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(a * *x, Vector({2, 4}));

  Matrix h = Matrix::from_rows({{1, Scalar::i()}, {0, 2}});
  EXPECT_EQ(h * inverse(h), Matrix::identity(2));
  EXPECT_THROW(inverse(Matrix::from_rows({{1, 2}, {2, 4}})), InputError);
}

TEST(Linalg, RandomInverseAndRankNullity) {
  std::mt19937_64 rng(seed() + 1);
  for (int n = 0; n < 20; ++n) {
    Matrix g = random_gram(rng, 4);
    EXPECT_EQ(inverse(g) * g, Matrix::identity(4));
    Matrix a = random_matrix(rng, 3, 5);
    EXPECT_EQ(rank(a) + kernel_basis(a).size(), 5u);
  }
}

TEST(Linalg, HermitianPositiveDefinite) {
  EXPECT_TRUE(check_positive_definite_hermitian(Matrix::diagonal({1, 2})).accepted());
  auto not_herm = check_positive_definite_hermitian(Matrix::from_rows({{1, 1}, {0, 1}}));
  EXPECT_FALSE(not_herm.hermitian);
  auto indefinite = check_positive_definite_hermitian(Matrix::from_rows({{1, 2}, {2, 1}}));
  EXPECT_TRUE(indefinite.hermitian);
  EXPECT_FALSE(indefinite.positive_minors);
  std::mt19937_64 rng(seed() + 2);
  for (int n = 0; n < 10; ++n) EXPECT_TRUE(check_positive_definite_hermitian(random_gram(rng, 5)).accepted());
}
