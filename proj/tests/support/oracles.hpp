#pragma once

// Test-side helpers. The oracles here work directly with r×r matrices and
// explicit polynomials, never with the library's structure constants, so they
// give an independent check on the builders and solvers.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "kforge/kforge.hpp"

namespace kforge_test {

using namespace kforge;

std::uint64_t seed();
void set_seed(std::uint64_t s);

inline Scalar random_scalar(std::mt19937_64& rng, int bound = 2, bool complex = true) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  return complex ? Scalar(mpq_class(dist(rng)), mpq_class(dist(rng))) : Scalar(dist(rng));
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int bound = 2) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_scalar(rng, bound);
  return m;
}

/// A†A + I is Hermitian positive definite for any A.
inline Matrix random_gram(std::mt19937_64& rng, std::size_t n) {
  Matrix a = random_matrix(rng, n, n);
  return a.adjoint() * a + Matrix::identity(n);
}

/// Dense random Gram blocks for small degrees; for large ones a direct sum of
/// random 2×2 blocks, which keeps exact inverses cheap.
inline MetricData random_metric(const GradedSpace& space, std::mt19937_64& rng, std::size_t dense_limit = 12) {
  MetricData m = MetricData::identity(space);
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    const std::size_t n = space.dim(q);
    Matrix g(n, n);
    if (n <= dense_limit) {
      g = random_gram(rng, n);
    } else {
      for (std::size_t start = 0; start < n; start += 2) {
        const std::size_t size = std::min<std::size_t>(2, n - start);
        Matrix b = random_gram(rng, size);
        for (std::size_t i = 0; i < size; ++i)
          for (std::size_t j = 0; j < size; ++j) g(start + i, start + j) = b(i, j);
      }
    }
    m.gram[static_cast<std::size_t>(q - space.min_degree)] = g;
  }
  return m;
}

inline GradedElement random_homogeneous(const GradedSpace& space, int q, std::mt19937_64& rng, int bound = 2) {
  Vector v(space.dim(q));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = random_scalar(rng, bound);
  return GradedElement::homogeneous(space, q, v);
}

/// All exponents in m variables of total degree 1..order.
inline std::vector<Exponent> monomials_up_to(std::size_t m, int order) {
  std::vector<Exponent> out;
  Exponent e(m, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == m) {
      if (total_degree(e) > 0) out.push_back(e);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
    e[i] = 0;
  };
  if (m > 0) rec(rec, 0, order);
  return out;
}

/// A random degree-q series with roughly `density` of the monomials populated.
inline GradedSeries random_series(const GradedSpace& space, int q, const std::vector<std::string>& params, int order,
                                  std::mt19937_64& rng, double density = 0.5) {
  GradedSeries s(params, order, GradedElement::zero(space));
  std::bernoulli_distribution keep(density);
  for (const auto& e : monomials_up_to(params.size(), order))
    if (keep(rng)) s.add_term(e, random_homogeneous(space, q, rng));
  return s;
}

// ---------------------------------------------------------------- matrix oracles

/// Truncated polynomial with matrix coefficients; the constant term is allowed.
struct MatrixPoly {
  std::size_t size = 0;
  int order = 0;
  std::map<Exponent, Matrix> terms;

  MatrixPoly(std::size_t n, int ord) : size(n), order(ord) {}

  void add(const Exponent& e, const Matrix& m) {
    if (total_degree(e) > order) return;
    auto it = terms.find(e);
    if (it == terms.end())
      terms.emplace(e, m);
    else
      it->second = it->second + m;
  }

  friend MatrixPoly operator*(const MatrixPoly& a, const MatrixPoly& b) {
    MatrixPoly out(a.size, a.order);
    for (const auto& [ea, ma] : a.terms)
      for (const auto& [eb, mb] : b.terms) {
        Exponent e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add(e, ma * mb);
      }
    return out;
  }
  friend MatrixPoly operator+(MatrixPoly a, const MatrixPoly& b) {
    for (const auto& [e, m] : b.terms) a.add(e, m);
    return a;
  }
  MatrixPoly scaled(const Scalar& s) const {
    MatrixPoly out(size, order);
    for (const auto& [e, m] : terms) out.add(e, m * s);
    return out;
  }
};

/// exp(X) for X with no constant term, by the truncated power series.
inline MatrixPoly matrix_exp(const MatrixPoly& x, std::size_t params) {
  MatrixPoly out(x.size, x.order);
  out.add(Exponent(params, 0), Matrix::identity(x.size));
  MatrixPoly power = out;
  for (int k = 1; k <= x.order; ++k) {
    power = (power * x).scaled(Scalar(1) / Scalar(k));
    out = out + power;
  }
  return out;
}

/// The r×r matrix sitting in form slot `slot` of a degree-q torus element.
inline Matrix torus_block(const Vector& part, std::size_t slot, int r) {
  Matrix m(static_cast<std::size_t>(r), static_cast<std::size_t>(r));
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) m(a, b) = part[slot * r * r + static_cast<std::size_t>(a * r + b)];
  return m;
}

inline void set_torus_block(Vector& part, std::size_t slot, int r, const Matrix& m) {
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) part[slot * r * r + static_cast<std::size_t>(a * r + b)] = m(a, b);
}

/// Matrix polynomial of form slot `slot` in the degree-q part of a series.
inline MatrixPoly slot_polynomial(const GradedSeries& s, int q, std::size_t slot, int r) {
  MatrixPoly out(static_cast<std::size_t>(r), s.order());
  for (const auto& [e, c] : s.terms()) out.add(e, torus_block(c.part(q), slot, r));
  return out;
}

/// For torus constants on the 2-torus: α∧α computed as
/// (A₁A₂ − A₂A₁) ē₁∧ē₂, where A_k is the ē_k component of the degree-1 element.
inline Matrix wedge_square_2torus(const Vector& degree1, int r) {
  Matrix a1 = torus_block(degree1, 0, r);
  Matrix a2 = torus_block(degree1, 1, r);
  return a1 * a2 - a2 * a1;
}

/// Explicit polynomial with scalar coefficients, constant term allowed.
using PolyMap = std::map<Exponent, Scalar>;

inline PolyMap poly_mul(const PolyMap& a, const PolyMap& b) {
  PolyMap out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

inline PolyMap poly_sub(PolyMap a, const PolyMap& b) {
  for (const auto& [e, c] : b) a[e] -= c;
  for (auto it = a.begin(); it != a.end();) it = it->second.is_zero() ? a.erase(it) : std::next(it);
  return a;
}

inline PolyMap to_poly_map(const Polynomial& p) {
  PolyMap out;
  for (const auto& [e, c] : p.terms()) out[e] = c;
  return out;
}

/// sl(2) ⊗ A where A has basis 1, x (degree 0) and ε (degree 1), dx = ε and
/// all products of x, ε vanish. A nonabelian dgLa with nonzero differential,
/// cohomology sl(2)⊗1 in degree 0 and nothing in degree 1.
inline DgLa sl2_dual_numbers() {
  // [e,f] = h, [h,e] = 2e, [h,f] = −2f with e, f, h = 0, 1, 2.
  std::vector<std::tuple<int, int, int, int>> lie = {{0, 1, 2, 1}, {1, 0, 2, -1}, {2, 0, 0, 2},
                                                     {0, 2, 0, -2}, {2, 1, 1, -2}, {1, 2, 1, 2}};
  GradedSpace space(0, {{"e", "f", "h", "e.x", "f.x", "h.x"}, {"e.eps", "f.eps", "h.eps"}});
  std::vector<BracketEntry> entries;
  for (const auto& [a, b, c, k] : lie) {
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b), uc = static_cast<std::size_t>(c);
    entries.push_back({0, ua, 0, ub, uc, Scalar(k)});
    entries.push_back({0, ua, 0, ub + 3, uc + 3, Scalar(k)});
    entries.push_back({0, ua + 3, 0, ub, uc + 3, Scalar(k)});
    entries.push_back({0, ua, 1, ub, uc, Scalar(k)});
    entries.push_back({1, ua, 0, ub, uc, Scalar(k)});
  }
  Matrix d0(3, 6);
  for (std::size_t a = 0; a < 3; ++a) d0(a, a + 3) = 1;
  return DgLa(space, {d0, Matrix(0, 3)}, entries);
}

/// Lattice count #{m ∈ [−M, M]² : m₁ + i·m₂ + c = 0}.
inline std::size_t twisted_lattice_count(int cutoff, const Scalar& c) {
  std::size_t count = 0;
  for (int m1 = -cutoff; m1 <= cutoff; ++m1)
    for (int m2 = -cutoff; m2 <= cutoff; ++m2)
      if ((Scalar(m1) + Scalar::i() * Scalar(m2) + c).is_zero()) ++count;
  return count;
}

}  // namespace kforge_test
