#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kforge/dgla.hpp"
#include "kforge/errors.hpp"
#include "kforge/matrix.hpp"

namespace kforge {

/// Per-degree Gram matrices. The pairing is ⟨a, b⟩ = a† · gram · b.
struct MetricData {
  int min_degree = 0;
  std::vector<Matrix> gram;

  static MetricData identity(const GradedSpace& space) {
    MetricData m;
    m.min_degree = space.min_degree;
    for (auto d : space.dims) m.gram.push_back(Matrix::identity(d));
    return m;
  }

  const Matrix& at(int q) const {
    static const Matrix empty;
    auto k = q - min_degree;
    if (k < 0 || k >= static_cast<int>(gram.size())) return empty;
    return gram[static_cast<std::size_t>(k)];
  }
  Matrix& at(int q) { return gram.at(static_cast<std::size_t>(q - min_degree)); }

  friend bool operator==(const MetricData&, const MetricData&) = default;
};

/// Throws MetricError unless every degree carries a Hermitian positive
/// definite Gram matrix of the right size.
inline void validate_metric(const GradedSpace& space, const MetricData& m) {
  if (m.min_degree != space.min_degree || static_cast<int>(m.gram.size()) != space.degree_count())
    throw MetricError("metric has " + std::to_string(m.gram.size()) + " degrees, expected " +
                      std::to_string(space.degree_count()));
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    const Matrix& g = m.at(q);
    if (g.rows() != space.dim(q) || g.cols() != space.dim(q))
      throw MetricError("Gram matrix in degree " + std::to_string(q) + " has shape " + g.shape_string());
    auto report = check_positive_definite_hermitian(g);
    if (!report.hermitian)
      throw MetricError("Gram matrix in degree " + std::to_string(q) + " is not Hermitian at entry (" +
                        std::to_string(report.asymmetric_entry->first) + "," +
                        std::to_string(report.asymmetric_entry->second) + ")");
    if (!report.positive_minors)
      throw MetricError("Gram matrix in degree " + std::to_string(q) + " is not positive definite (leading minor " +
                        std::to_string(*report.failing_minor) + ")");
  }
}

/// Metric adjoint d* of the differential: block(q) maps degree q to q-1 and
/// satisfies gram_{q-1} · d*_q = (d_{q-1})† · gram_q.
inline GradedOperator adjoint_differential(const DgLa& L, const MetricData& m) {
  const GradedSpace& space = L.space();
  validate_metric(space, m);
  std::vector<Matrix> blocks;
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    if (space.dim(q - 1) == 0) {
      blocks.emplace_back(0, space.dim(q));
      continue;
    }
    Matrix rhs = L.differential().block(q - 1).adjoint() * m.at(q);
    auto x = solve_linear(m.at(q - 1), rhs);
    if (!x) throw MetricError("singular Gram matrix in degree " + std::to_string(q - 1));
    blocks.push_back(std::move(*x));
  }
  return GradedOperator(space, -1, std::move(blocks));
}

/// Metric-dependent Hodge operators of a dgLa.
struct HodgeData {
  MetricData metric;
  GradedOperator adjoint;
  GradedOperator laplacian;
  /// Columns span ker(laplacian) in each degree, canonical echelon basis.
  std::vector<Matrix> harmonic_basis;
  /// coordinates(q) · v gives the coordinates of P v in harmonic_basis(q).
  std::vector<Matrix> harmonic_coordinates;
  GradedOperator projector;
  GradedOperator green;

  std::size_t harmonic_dim(int q) const { return basis(q).cols(); }
  const Matrix& basis(int q) const {
    static const Matrix empty;
    auto k = q - projector.space().min_degree;
    if (k < 0 || k >= static_cast<int>(harmonic_basis.size())) return empty;
    return harmonic_basis[static_cast<std::size_t>(k)];
  }
  const Matrix& coordinates(int q) const {
    static const Matrix empty;
    auto k = q - projector.space().min_degree;
    if (k < 0 || k >= static_cast<int>(harmonic_coordinates.size())) return empty;
    return harmonic_coordinates[static_cast<std::size_t>(k)];
  }
  GradedElement harmonic_element(int q, std::size_t i) const {
    return GradedElement::homogeneous(projector.space(), q, basis(q).column(i));
  }
};

/// Builds d*, □, the harmonic basis, P and G. G is the inverse of □ on
/// im □ extended by zero on ker □, obtained from one exact multi-right-hand
/// side solve □X = Id − P followed by G = (Id − P) X (Id − P).
inline HodgeData hodge_data(const DgLa& L, const MetricData& m) {
  const GradedSpace& space = L.space();
  HodgeData h;
  h.metric = m;
  h.adjoint = adjoint_differential(L, m);
  const GradedOperator& d = L.differential();
  h.laplacian = h.adjoint.after(d) + d.after(h.adjoint);

  std::vector<Matrix> projector_blocks, green_blocks;
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    const std::size_t n = space.dim(q);
    const Matrix& lap = h.laplacian.block(q);
    const Matrix& gram = m.at(q);
    Matrix basis = Matrix::from_columns(kernel_basis(lap), n);
    // coordinates = (B† G B)^{-1} B† G
    Matrix bg = basis.adjoint() * gram;
    Matrix coords = basis.cols() ? inverse(bg * basis) * bg : Matrix(0, n);
    Matrix projector = basis * coords;
    Matrix complement = Matrix::identity(n) - projector;
    auto x = solve_linear(lap, complement);
    if (!x) throw ConsistencyError("Laplacian image does not contain (Id - P) in degree " + std::to_string(q));
    green_blocks.push_back(complement * *x * complement);
    projector_blocks.push_back(std::move(projector));
    h.harmonic_basis.push_back(std::move(basis));
    h.harmonic_coordinates.push_back(std::move(coords));
  }
  h.projector = GradedOperator(space, 0, std::move(projector_blocks));
  h.green = GradedOperator(space, 0, std::move(green_blocks));
  return h;
}

/// dim ker d_q − rank d_{q−1}, metric free.
inline std::vector<std::size_t> betti_numbers(const DgLa& L) {
  const GradedSpace& space = L.space();
  std::vector<std::size_t> ranks;
  for (int q = space.min_degree; q <= space.max_degree; ++q) ranks.push_back(rank(L.differential().block(q)));
  std::vector<std::size_t> betti;
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    auto k = static_cast<std::size_t>(q - space.min_degree);
    std::size_t incoming = k > 0 ? ranks[k - 1] : 0;
    betti.push_back(space.dim(q) - ranks[k] - incoming);
  }
  return betti;
}

struct NamedCheck {
  std::string name;
  bool passed = true;
};

struct HodgeReport {
  std::vector<NamedCheck> checks;
  bool splitting_exact = false;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Re-verifies every identity the Hodge operators must satisfy, exactly.
inline HodgeReport verify_hodge(const DgLa& L, const HodgeData& h) {
  const GradedSpace& space = L.space();
  const GradedOperator& d = L.differential();
  const GradedOperator& ds = h.adjoint;
  const GradedOperator& P = h.projector;
  const GradedOperator& G = h.green;
  const GradedOperator& lap = h.laplacian;
  const GradedOperator id = GradedOperator::identity(space);
  HodgeReport r;
  auto add = [&](std::string name, bool ok) { r.checks.push_back({std::move(name), ok}); };

  bool adjoint_ok = true;
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    if (space.dim(q - 1) == 0) continue;
    if (!(h.metric.at(q - 1) * ds.block(q) == d.block(q - 1).adjoint() * h.metric.at(q))) adjoint_ok = false;
  }
  add("adjoint_identity", adjoint_ok);
  add("laplacian_formula", lap == ds.after(d) + d.after(ds));
  const bool splitting = (id == P + lap.after(G));
  r.splitting_exact = splitting;
  add("splitting", splitting);
  add("green_laplacian", G.after(lap) == id - P);
  add("green_kills_harmonics", G.after(P).is_zero() && P.after(G).is_zero());
  add("projector_idempotent", P.after(P) == P);
  bool self_adjoint = true;
  for (int q = space.min_degree; q <= space.max_degree; ++q)
    if (!(h.metric.at(q) * P.block(q) == P.block(q).adjoint() * h.metric.at(q))) self_adjoint = false;
  add("projector_self_adjoint", self_adjoint);
  add("projector_kills_exact", P.after(d).is_zero() && ds.after(P).is_zero());
  add("green_commutes_d", G.after(d) == d.after(G));
  add("green_commutes_adjoint", G.after(ds) == ds.after(G));
  return r;
}

}  // namespace kforge
