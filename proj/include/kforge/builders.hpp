#pragma once

#include <bit>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kforge/dgla.hpp"
#include "kforge/equivariance.hpp"
#include "kforge/errors.hpp"
#include "kforge/hodge.hpp"

namespace kforge {

struct BuiltDgla {
  DgLa dgla;
  MetricData metric;
};

struct BuiltToy {
  DgLa dgla;
  MetricData metric;
  GroupAction action;
};

/// How the bracket of two form-valued endomorphisms is signed.
enum class WedgeBracket {
  /// [A⊗ω, B⊗η] = AB⊗ω∧η − (−1)^{|ω||η|} BA⊗η∧ω, i.e. [A,B]⊗ω∧η.
  graded,
  /// [A⊗ω, B⊗η] = (AB − (−1)^{|ω||η|} BA)⊗ω∧η. Not antisymmetric on odd
  /// pairs; kept as a negative fixture for the validator.
  same_wedge,
};

namespace forms {

/// Subsets of {0..n-1} of size q as bitmasks, in lexicographic order of
/// their sorted elements.
inline std::vector<unsigned> subsets(int n, int q) {
  std::vector<std::vector<int>> lists;
  std::vector<int> current;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(current.size()) == q) {
      lists.push_back(current);
      return;
    }
    for (int k = start; k < n; ++k) {
      current.push_back(k);
      self(self, k + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
  std::vector<unsigned> masks;
  for (const auto& l : lists) {
    unsigned m = 0;
    for (int k : l) m |= 1u << k;
    masks.push_back(m);
  }
  return masks;
}

/// Sign s with e_a ∧ e_b = s · e_{a∪b}, or 0 if a and b overlap.
inline int wedge_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  int swaps = 0;
  for (unsigned bits = b; bits; bits &= bits - 1) {
    const unsigned low = bits & (~bits + 1);
    // elements of a larger than this element of b must pass over it
    swaps += std::popcount(a & ~(low | (low - 1)));
  }
  return parity_sign(swaps);
}

inline std::string suffix(unsigned mask) {
  if (mask == 0) return "";
  std::string s = ".e";
  for (int k = 0; k < 32; ++k)
    if (mask & (1u << k)) s += std::to_string(k + 1);
  return s;
}

}  // namespace forms

inline void check_torus_bounds(int n, int r) {
  if (n < 1 || r < 1) throw InputError("torus builder needs dim >= 1 and rank >= 1");
  if (n > 2) throw ResourceError("torus builder supports dim <= 2, got " + std::to_string(n));
  if (r > 4) throw ResourceError("torus builder supports rank <= 4, got " + std::to_string(r));
}

/// Constant-coefficient forms with values in gl(r) on an n-torus:
/// gl(r) ⊗ Λ•(ℂⁿ) with zero differential and identity Gram. Basis vector
/// index in degree q is (form index)·r² + (row·r + col).
inline BuiltDgla build_torus_constant_dgla(int n, int r, WedgeBracket sign = WedgeBracket::graded) {
  check_torus_bounds(n, r);
  const std::size_t units = static_cast<std::size_t>(r * r);
  std::vector<std::vector<unsigned>> masks;
  std::vector<std::vector<std::string>> names;
  for (int q = 0; q <= n; ++q) {
    masks.push_back(forms::subsets(n, q));
    std::vector<std::string> deg_names;
    for (unsigned m : masks.back())
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) deg_names.push_back("E" + std::to_string(a + 1) + std::to_string(b + 1) + forms::suffix(m));
    names.push_back(std::move(deg_names));
  }
  GradedSpace space(0, names);

  auto form_index = [&](int q, unsigned mask) {
    const auto& list = masks[static_cast<std::size_t>(q)];
    for (std::size_t k = 0; k < list.size(); ++k)
      if (list[k] == mask) return k;
    throw ConsistencyError("unknown form mask");
  };

  std::vector<BracketEntry> entries;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; p + q <= n; ++q)
      for (std::size_t wi = 0; wi < masks[p].size(); ++wi)
        for (std::size_t wj = 0; wj < masks[q].size(); ++wj) {
          const unsigned w = masks[p][wi], v = masks[q][wj];
          const int s = forms::wedge_sign(w, v);
          if (s == 0) continue;
          const std::size_t target_form = form_index(p + q, w | v);
          const int ba_sign = (sign == WedgeBracket::graded) ? 1 : parity_sign(p * q);
          // [E_ab, E_cd] = δ_bc E_ad − (sign) δ_da E_cb, times s on the form part
          for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b)
              for (int c = 0; c < r; ++c)
                for (int d = 0; d < r; ++d) {
                  const std::size_t i = wi * units + static_cast<std::size_t>(a * r + b);
                  const std::size_t j = wj * units + static_cast<std::size_t>(c * r + d);
                  if (b == c)
                    entries.push_back({p, i, q, j, target_form * units + static_cast<std::size_t>(a * r + d), Scalar(s)});
                  if (d == a)
                    entries.push_back(
                        {p, i, q, j, target_form * units + static_cast<std::size_t>(c * r + b), Scalar(-s * ba_sign)});
                }
        }

  std::vector<Matrix> differential;
  for (int q = 0; q <= n; ++q) differential.emplace_back(space.dim(q + 1), space.dim(q));
  DgLa L(space, std::move(differential), std::move(entries));
  MetricData metric = MetricData::identity(L.space());
  return {std::move(L), std::move(metric)};
}

/// Abelian Dolbeault complex of a flat line-bundle twist on a 1-torus,
/// Fourier modes m ∈ [−M, M]², with d f_m = (m₁ + i·m₂ + c) f_m dz̄.
inline BuiltDgla build_twisted_dolbeault(int cutoff, const Scalar& twist) {
  if (cutoff < 0) throw InputError("cutoff must be non-negative");
  if (cutoff > 8) throw ResourceError("twisted builder supports cutoff <= 8, got " + std::to_string(cutoff));
  std::vector<std::string> functions, one_forms;
  std::vector<Scalar> symbol;
  for (int m1 = -cutoff; m1 <= cutoff; ++m1)
    for (int m2 = -cutoff; m2 <= cutoff; ++m2) {
      const std::string mode = "f[" + std::to_string(m1) + "," + std::to_string(m2) + "]";
      functions.push_back(mode);
      one_forms.push_back(mode + "dzbar");
      symbol.push_back(Scalar(mpq_class(m1), mpq_class(m2)) + twist);
    }
  GradedSpace space(0, {functions, one_forms});
  std::vector<Matrix> differential{Matrix::diagonal(symbol), Matrix(0, symbol.size())};
  DgLa L(space, std::move(differential), {});
  MetricData metric = MetricData::identity(L.space());
  return {std::move(L), std::move(metric)};
}

/// Smallest fixture with a third-order obstruction. Degree 1 = ⟨x, y⟩,
/// degree 2 = ⟨u, v⟩; dy = u; [x,x] = u, [x,y] = [y,x] = v. Bundled with the
/// Z/2 action x ↦ −x, v ↦ −v.
inline BuiltToy build_toy3() {
  GradedSpace space(1, {{"x", "y"}, {"u", "v"}});
  Matrix d1 = Matrix::from_rows({{0, 1}, {0, 0}});
  std::vector<Matrix> differential{d1, Matrix(0, 2)};
  std::vector<BracketEntry> entries{
      {1, 0, 1, 0, 0, Scalar(1)},
      {1, 0, 1, 1, 1, Scalar(1)},
      {1, 1, 1, 0, 1, Scalar(1)},
  };
  DgLa L(space, std::move(differential), std::move(entries));
  MetricData metric = MetricData::identity(L.space());
  GradedOperator g(L.space(), 0, {Matrix::diagonal({-1, 1}), Matrix::diagonal({1, -1})});
  GroupAction action{{g}, {2}};
  return {std::move(L), std::move(metric), std::move(action)};
}

/// True if h†h = λ·Id for some scalar λ.
inline bool is_scaled_unitary(const Matrix& h) {
  Matrix hh = h.adjoint() * h;
  if (hh.rows() == 0) return true;
  return hh == Matrix::identity(hh.rows()) * hh(0, 0);
}

namespace detail {

/// Block-diagonal operator on gl(r) ⊗ Λ•(ℂⁿ) acting by `unit_map` (an
/// r²×r² matrix on matrix units) in every form slot.
inline GradedOperator per_form_operator(const GradedSpace& space, const Matrix& unit_map) {
  const std::size_t units = unit_map.rows();
  std::vector<Matrix> blocks;
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    const std::size_t dim = space.dim(q);
    Matrix block(dim, dim);
    for (std::size_t f = 0; f < dim / units; ++f)
      for (std::size_t i = 0; i < units; ++i)
        for (std::size_t j = 0; j < units; ++j) block(f * units + i, f * units + j) = unit_map(i, j);
    blocks.push_back(std::move(block));
  }
  return GradedOperator(space, 0, std::move(blocks));
}

inline GradedSpace torus_space(int n, int r) { return build_torus_constant_dgla(n, r).dgla.space(); }

}  // namespace detail

/// Conjugation A⊗ω ↦ (h⁻¹Ah)⊗ω on the torus-constant dgLa of the given
/// dimension and rank.
inline GroupAction build_conjugation_action(int n, int r, const Matrix& h) {
  check_torus_bounds(n, r);
  if (h.rows() != static_cast<std::size_t>(r) || h.cols() != static_cast<std::size_t>(r))
    throw InputError("conjugating matrix must be " + std::to_string(r) + "x" + std::to_string(r));
  if (rank(h) != h.rows()) throw InputError("conjugating matrix is singular");
  const Matrix hinv = inverse(h);
  const std::size_t units = static_cast<std::size_t>(r * r);
  Matrix unit_map(units, units);
  // h⁻¹ E_ab h = Σ_ij (h⁻¹)_ia h_bj E_ij
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          unit_map(static_cast<std::size_t>(i * r + j), static_cast<std::size_t>(a * r + b)) = hinv(i, a) * h(b, j);
  return GroupAction{{detail::per_form_operator(detail::torus_space(n, r), unit_map)}, {}};
}

/// The inner derivation A⊗ω ↦ [X, A]⊗ω.
inline InfinitesimalAction build_inner_derivation(int n, int r, const Matrix& x) {
  check_torus_bounds(n, r);
  if (x.rows() != static_cast<std::size_t>(r) || x.cols() != static_cast<std::size_t>(r))
    throw InputError("derivation matrix must be " + std::to_string(r) + "x" + std::to_string(r));
  const std::size_t units = static_cast<std::size_t>(r * r);
  Matrix unit_map(units, units);
  // [X, E_ab] = Σ_i X_ia E_ib − Σ_j X_bj E_aj
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      const auto col = static_cast<std::size_t>(a * r + b);
      for (int i = 0; i < r; ++i) unit_map(static_cast<std::size_t>(i * r + b), col) += x(i, a);
      for (int j = 0; j < r; ++j) unit_map(static_cast<std::size_t>(a * r + j), col) -= x(b, j);
    }
  return InfinitesimalAction{{detail::per_form_operator(detail::torus_space(n, r), unit_map)}};
}

/// The coordinate swap z₁ ↔ z₂ on the 2-torus, acting on the form factor of
/// gl(r) ⊗ Λ•(ℂ²): ē₁ ↔ ē₂, ē₁∧ē₂ ↦ −ē₁∧ē₂.
inline GroupAction build_form_swap_action(int r) {
  check_torus_bounds(2, r);
  const GradedSpace space = detail::torus_space(2, r);
  const std::size_t units = static_cast<std::size_t>(r * r);
  Matrix deg1(2 * units, 2 * units);
  for (std::size_t i = 0; i < units; ++i) {
    deg1(units + i, i) = 1;
    deg1(i, units + i) = 1;
  }
  GradedOperator g(space, 0, {Matrix::identity(units), deg1, Matrix::identity(units) * Scalar(-1)});
  return GroupAction{{g}, {2}};
}

}  // namespace kforge
