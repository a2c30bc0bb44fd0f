#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kforge/dgla.hpp"
#include "kforge/errors.hpp"
#include "kforge/hodge.hpp"
#include "kforge/series.hpp"

namespace kforge {

struct SolveOptions {
  std::size_t warn_parameters = 16;
  std::size_t max_parameters = 32;
  /// Ignore max_parameters.
  bool force = false;
};

/// Formal Kuranishi family in harmonic gauge, truncated at `order`.
struct KuranishiFamily {
  std::vector<std::string> parameters;
  int order = 1;
  /// Σ t_i h_i over the degree-1 harmonic basis.
  GradedSeries linear_part;
  GradedSeries alpha;
  /// Coordinates of ½P[α,α] in the degree-2 harmonic basis.
  CoordinateSeries obstruction;
  /// Indices (into the degree-2 harmonic basis) of the nonzero coordinates.
  std::vector<std::size_t> generator_indices;
  std::vector<Polynomial> ideal_generators;
  std::vector<std::string> notices;

  bool trivial() const { return parameters.empty(); }
};

inline GradedSeries zero_series(const GradedSpace& space, const std::vector<std::string>& params, int order) {
  return GradedSeries(params, order, GradedElement::zero(space));
}

/// Σ t_i h_i where h_i runs over the degree-1 harmonic basis.
inline GradedSeries harmonic_linear_series(const GradedSpace& space, const HodgeData& h,
                                           const std::vector<std::string>& params, int order) {
  GradedSeries s = zero_series(space, params, order);
  for (std::size_t i = 0; i < params.size(); ++i) s.add_term(unit_exponent(params.size(), i), h.harmonic_element(1, i));
  return s;
}

/// Coordinates of P v in the degree-2 harmonic basis, via the Gram pairing.
inline CoordinateSeries obstruction_coordinates(const GradedSpace& space, const HodgeData& h, const GradedSeries& s) {
  const Matrix& coords = h.coordinates(2);
  const std::size_t dim = h.harmonic_dim(2);
  return map_coefficients(s, Vector(dim), [&](const GradedElement& c) {
    if (!space.contains(2) || dim == 0) return Vector(dim);
    return coords * c.part(2);
  });
}

/// Σ_c ob_c(t) · h_c in degree 2.
inline GradedSeries embed_obstruction(const GradedSpace& space, const HodgeData& h, const CoordinateSeries& ob) {
  return map_coefficients(ob, GradedElement::zero(space), [&](const Vector& v) {
    if (v.size() == 0) return GradedElement::zero(space);
    return GradedElement::homogeneous(space, 2, h.basis(2) * v);
  });
}

/// d s + ½[s, s].
inline GradedSeries mc_residual(const DgLa& L, const GradedSeries& s) {
  return apply_operator(L.differential(), s) + series_bracket(L, s, s) * Scalar::rational(1, 2);
}

/// K(β) = β + ½ d*G[β, β].
inline GradedSeries kuranishi_map(const DgLa& L, const HodgeData& h, const GradedSeries& beta) {
  if (!series_concentrated_in(beta, 1)) throw InputError("Kuranishi map expects degree-1 coefficients");
  GradedOperator dsg = h.adjoint.after(h.green);
  return beta + apply_operator(dsg, series_bracket(L, beta, beta)) * Scalar::rational(1, 2);
}

/// □ s + ½ d*[s, s].
inline GradedSeries elliptic_residual(const DgLa& L, const HodgeData& h, const GradedSeries& s) {
  if (!series_concentrated_in(s, 1)) throw InputError("elliptic residual expects degree-1 coefficients");
  return apply_operator(h.laplacian, s) + apply_operator(h.adjoint, series_bracket(L, s, s)) * Scalar::rational(1, 2);
}

/// The three components (P s, d* s, d* MC(s)) of the slice map. A series lies
/// in the slice when the last two vanish.
struct SliceResidual {
  GradedSeries harmonic;
  GradedSeries coclosed;
  GradedSeries equation;
  bool in_slice() const { return coclosed.is_zero() && equation.is_zero(); }
};

inline SliceResidual slice_residual(const DgLa& L, const HodgeData& h, const GradedSeries& s) {
  if (!series_concentrated_in(s, 1)) throw InputError("slice residual expects degree-1 coefficients");
  return {apply_operator(h.projector, s), apply_operator(h.adjoint, s), apply_operator(h.adjoint, mc_residual(L, s))};
}

/// Solves Maurer-Cartan order by order in harmonic gauge:
///   α_1 = Σ t_i h_i,   α_k = −½ d*G Σ_{i+j=k} [α_i, α_j],
/// and records ob = ½P[α, α] in harmonic degree-2 coordinates.
inline KuranishiFamily solve_kuranishi(const DgLa& L, const HodgeData& h, int order, const SolveOptions& options = {}) {
  if (order < 1) throw InputError("order must be at least 1, got " + std::to_string(order));
  const GradedSpace& space = L.space();
  const std::size_t m = h.harmonic_dim(1);
  if (m > options.max_parameters && !options.force)
    throw ResourceError(std::to_string(m) + " parameters exceed the limit of " + std::to_string(options.max_parameters));

  KuranishiFamily f;
  f.order = order;
  f.parameters = default_parameters(m);
  if (m > options.warn_parameters)
    f.notices.push_back("large parameter count (" + std::to_string(m) + "); monomial counts grow quickly");
  if (m == 0) f.notices.push_back("H^1 = 0: the deformation problem is rigid, trivial family");

  f.linear_part = harmonic_linear_series(space, h, f.parameters, order);
  f.alpha = f.linear_part;
  const GradedOperator correction = h.adjoint.after(h.green) * Scalar::rational(-1, 2);
  for (int k = 2; k <= order && m > 0; ++k)
    f.alpha += apply_operator(correction, series_bracket_homogeneous(L, f.alpha, f.alpha, k));

  f.obstruction = obstruction_coordinates(space, h, series_bracket(L, f.alpha, f.alpha) * Scalar::rational(1, 2));
  for (std::size_t c = 0; c < h.harmonic_dim(2); ++c) {
    Polynomial g = coordinate_polynomial(f.obstruction, c);
    if (g.is_zero()) continue;
    f.generator_indices.push_back(c);
    f.ideal_generators.push_back(std::move(g));
  }
  return f;
}

/// The five exact identities every solved family satisfies.
struct FamilyDiagnostics {
  bool harmonic_part = false;   // P α = α_1
  bool coclosed = false;        // d* α = 0
  bool kuranishi_fixed = false; // K(α) = α_1
  bool elliptic = false;        // □α + ½d*[α,α] = 0
  bool fixed_point = false;     // MC(α) = ob + d*G[MC(α), α]
  bool all() const { return harmonic_part && coclosed && kuranishi_fixed && elliptic && fixed_point; }
};

inline FamilyDiagnostics verify_family(const DgLa& L, const HodgeData& h, const KuranishiFamily& f) {
  const GradedSpace& space = L.space();
  FamilyDiagnostics d;
  d.harmonic_part = apply_operator(h.projector, f.alpha) == f.linear_part;
  d.coclosed = apply_operator(h.adjoint, f.alpha).is_zero();
  d.kuranishi_fixed = kuranishi_map(L, h, f.alpha) == f.linear_part;
  d.elliptic = elliptic_residual(L, h, f.alpha).is_zero();
  const GradedSeries residual = mc_residual(L, f.alpha);
  const GradedSeries rhs = embed_obstruction(space, h, f.obstruction) +
                           apply_operator(h.adjoint.after(h.green), series_bracket(L, residual, f.alpha));
  d.fixed_point = residual == rhs;
  return d;
}

/// exp(ξ)·s = s + Σ_{n≥0} ad_ξⁿ/(n+1)! ([ξ, s] − dξ), truncated. ξ must have
/// degree-0 coefficients and s degree-1 coefficients.
inline GradedSeries gauge_transform(const DgLa& L, const GradedSeries& xi, const GradedSeries& s) {
  xi.require_compatible(s);
  if (!series_concentrated_in(xi, 0)) throw InputError("gauge generator must have degree-0 coefficients");
  if (!series_concentrated_in(s, 1)) throw InputError("gauge action expects degree-1 coefficients");
  GradedSeries term = series_bracket(L, xi, s) - apply_operator(L.differential(), xi);
  GradedSeries out = s;
  for (unsigned n = 0; !term.is_zero(); ++n) {
    out += term * (Scalar(1) / factorial(n + 1));
    term = series_bracket(L, xi, term);
  }
  return out;
}

}  // namespace kforge
