#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kforge/dgla.hpp"
#include "kforge/errors.hpp"
#include "kforge/hodge.hpp"
#include "kforge/kuranishi.hpp"
#include "kforge/series.hpp"

namespace kforge {

/// Finite group given by degree-preserving invertible generators.
struct GroupAction {
  std::vector<GradedOperator> generators;
  /// Empty, or one declared order per generator.
  std::vector<int> declared_orders;
};

/// Lie algebra of a positive-dimensional group, given by degree-0
/// derivations.
struct InfinitesimalAction {
  std::vector<GradedOperator> derivations;
};

struct ActionCheck {
  std::string condition;
  bool passed = true;
  /// Informational checks do not affect GeneratorReport::passed().
  bool required = true;
  std::string witness{};
};

struct GeneratorReport {
  std::size_t index = 0;
  std::vector<ActionCheck> checks{};

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ActionCheck& c) { return c.passed || !c.required; });
  }
  const ActionCheck& check(const std::string& condition) const {
    for (const auto& c : checks)
      if (c.condition == condition) return c;
    throw InputError("no condition named " + condition);
  }
};

struct ActionReport {
  std::vector<GeneratorReport> generators;
  bool passed() const {
    return std::all_of(generators.begin(), generators.end(), [](const GeneratorReport& g) { return g.passed(); });
  }
  bool holds(const std::string& condition) const {
    return std::all_of(generators.begin(), generators.end(),
                       [&](const GeneratorReport& g) { return g.check(condition).passed; });
  }
};

namespace detail {

inline void require_degree_preserving(const GradedSpace& space, const GradedOperator& g) {
  if (!(g.space() == space)) throw InputError("action matrices do not match the dgLa graded space");
  if (g.shift() != 0) throw InputError("action matrices must preserve degree");
}

inline std::string pair_witness(const DgLa& L, std::size_t a, std::size_t b) {
  auto [p, i] = L.local(a);
  auto [q, j] = L.local(b);
  return "(" + L.space().name(p, i) + ", " + L.space().name(q, j) + ")";
}

inline ActionCheck bracket_check(const DgLa& L, const GradedOperator& g, bool derivation) {
  ActionCheck check{derivation ? "derivation" : "preserves_bracket"};
  const GradedSpace& space = L.space();
  const std::size_t n = space.total_dim();
  std::vector<GradedElement> basis, images;
  for (std::size_t a = 0; a < n; ++a) {
    auto [q, i] = L.local(a);
    basis.push_back(GradedElement::basis(space, q, i));
    images.push_back(g.apply(basis.back()));
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      GradedElement lhs = g.apply(L.bracket(basis[a], basis[b]));
      GradedElement rhs = derivation ? L.bracket(images[a], basis[b]) + L.bracket(basis[a], images[b])
                                     : L.bracket(images[a], images[b]);
      if (!(lhs == rhs)) {
        check.passed = false;
        check.witness = pair_witness(L, a, b);
        return check;
      }
    }
  return check;
}

inline ActionCheck commutes_check(std::string name, const GradedOperator& g, const GradedOperator& op) {
  ActionCheck check{std::move(name)};
  const GradedSpace& space = g.space();
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    const int target = q + op.shift();
    if (!space.contains(target)) continue;
    if (!(g.block(target) * op.block(q) == op.block(q) * g.block(q))) {
      check.passed = false;
      check.witness = "degree " + std::to_string(q);
      break;
    }
  }
  return check;
}

inline std::string entry_witness(int q, std::size_t i, std::size_t j) {
  return "degree " + std::to_string(q) + " entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
}

inline ActionCheck matrix_identity_check(std::string name, const GradedSpace& space,
                                         const std::vector<std::pair<Matrix, Matrix>>& sides) {
  ActionCheck check{std::move(name)};
  int q = space.min_degree;
  for (const auto& [lhs, rhs] : sides) {
    for (std::size_t i = 0; i < lhs.rows() && check.passed; ++i)
      for (std::size_t j = 0; j < lhs.cols(); ++j)
        if (lhs(i, j) != rhs(i, j)) {
          check.passed = false;
          check.witness = entry_witness(q, i, j);
          break;
        }
    if (!check.passed) break;
    ++q;
  }
  return check;
}

inline GradedOperator power(const GradedOperator& g, int k) {
  GradedOperator out = GradedOperator::identity(g.space());
  for (int n = 0; n < k; ++n) out = g.after(out);
  return out;
}

}  // namespace detail

/// Checks the conditions a finite group action must satisfy: invertibility,
/// commutation with d, bracket preservation, metric invariance g†·gram·g =
/// gram, declared orders, and the derived commutation with □, P and G.
inline ActionReport validate_action(const DgLa& L, const MetricData& m, const GroupAction& action) {
  const GradedSpace& space = L.space();
  const HodgeData h = hodge_data(L, m);
  ActionReport report;
  for (std::size_t n = 0; n < action.generators.size(); ++n) {
    const GradedOperator& g = action.generators[n];
    detail::require_degree_preserving(space, g);
    GeneratorReport r{n};

    ActionCheck invertible{"invertible"};
    for (int q = space.min_degree; q <= space.max_degree; ++q)
      if (rank(g.block(q)) != space.dim(q)) {
        invertible.passed = false;
        invertible.witness = "degree " + std::to_string(q);
        break;
      }
    r.checks.push_back(invertible);
    r.checks.push_back(detail::commutes_check("commutes_d", g, L.differential()));
    r.checks.push_back(detail::bracket_check(L, g, false));

    std::vector<std::pair<Matrix, Matrix>> metric_sides;
    for (int q = space.min_degree; q <= space.max_degree; ++q)
      metric_sides.emplace_back(g.block(q).adjoint() * m.at(q) * g.block(q), m.at(q));
    r.checks.push_back(detail::matrix_identity_check("metric_invariant", space, metric_sides));

    if (!action.declared_orders.empty()) {
      if (action.declared_orders.size() != action.generators.size())
        throw InputError("orders list does not match the number of generators");
      ActionCheck order{"declared_order"};
      order.passed = action.declared_orders[n] >= 1 &&
                     detail::power(g, action.declared_orders[n]) == GradedOperator::identity(space);
      if (!order.passed) order.witness = "g^" + std::to_string(action.declared_orders[n]) + " != Id";
      r.checks.push_back(order);
    }

    r.checks.push_back(detail::commutes_check("commutes_laplacian", g, h.laplacian));
    r.checks.push_back(detail::commutes_check("commutes_projector", g, h.projector));
    r.checks.push_back(detail::commutes_check("commutes_green", g, h.green));
    report.generators.push_back(std::move(r));
  }
  return report;
}

/// Checks a Lie-algebra action: each X commutes with d, is a derivation of
/// the bracket, and commutes with □, P and G. Skew-adjointness
/// X†·gram + gram·X = 0 is reported but not required, since complexified
/// directions such as i·X are not skew.
inline ActionReport validate_action(const DgLa& L, const MetricData& m, const InfinitesimalAction& action) {
  const GradedSpace& space = L.space();
  const HodgeData h = hodge_data(L, m);
  ActionReport report;
  for (std::size_t n = 0; n < action.derivations.size(); ++n) {
    const GradedOperator& x = action.derivations[n];
    detail::require_degree_preserving(space, x);
    GeneratorReport r{n};
    r.checks.push_back(detail::commutes_check("commutes_d", x, L.differential()));
    r.checks.push_back(detail::bracket_check(L, x, true));
    std::vector<std::pair<Matrix, Matrix>> skew_sides;
    for (int q = space.min_degree; q <= space.max_degree; ++q)
      skew_sides.emplace_back(x.block(q).adjoint() * m.at(q) + m.at(q) * x.block(q), Matrix(space.dim(q), space.dim(q)));
    ActionCheck skew = detail::matrix_identity_check("metric_skew", space, skew_sides);
    skew.required = false;
    r.checks.push_back(skew);
    r.checks.push_back(detail::commutes_check("commutes_laplacian", x, h.laplacian));
    r.checks.push_back(detail::commutes_check("commutes_projector", x, h.projector));
    r.checks.push_back(detail::commutes_check("commutes_green", x, h.green));
    report.generators.push_back(std::move(r));
  }
  return report;
}

/// All elements of the group generated by `action`, breadth first from the
/// identity. Throws ResourceError once more than max_size elements appear.
inline std::vector<GradedOperator> group_closure(const GradedSpace& space, const GroupAction& action, std::size_t max_size) {
  std::vector<GradedOperator> elements{GradedOperator::identity(space)};
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t current = frontier.front();
    frontier.pop_front();
    for (const auto& g : action.generators) {
      detail::require_degree_preserving(space, g);
      GradedOperator next = g.after(elements[current]);
      if (std::find(elements.begin(), elements.end(), next) != elements.end()) continue;
      if (elements.size() >= max_size)
        throw ResourceError("group closure exceeds the bound of " + std::to_string(max_size) + " elements");
      elements.push_back(std::move(next));
      frontier.push_back(elements.size() - 1);
    }
  }
  return elements;
}

/// Unitary trick for finite groups: gram' = (1/|G|) Σ_{g∈G} g† · gram · g.
inline MetricData average_metric(const GradedSpace& space, const MetricData& m, const GroupAction& action,
                                 std::size_t max_group_size) {
  validate_metric(space, m);
  const auto elements = group_closure(space, action, max_group_size);
  MetricData out = m;
  const Scalar weight = Scalar(1) / Scalar(static_cast<long>(elements.size()));
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    Matrix sum(space.dim(q), space.dim(q));
    for (const auto& g : elements) sum += g.block(q).adjoint() * m.at(q) * g.block(q);
    out.at(q) = sum * weight;
  }
  return out;
}

/// Matrices of an operator restricted to the harmonic spaces of degree 1
/// and 2, in the harmonic bases.
struct HarmonicRepresentation {
  Matrix degree1;
  Matrix degree2;
};

inline Matrix restrict_to_harmonics(const HodgeData& h, const GradedOperator& g, int q) {
  const Matrix& basis = h.basis(q);
  if (basis.cols() == 0) return Matrix(0, 0);
  auto rho = solve_linear(basis, g.block(q) * basis);
  if (!rho) throw ConsistencyError("operator does not preserve the harmonic space in degree " + std::to_string(q));
  return *rho;
}

inline HarmonicRepresentation induced_harmonic_action(const HodgeData& h, const GradedOperator& g) {
  return {restrict_to_harmonics(h, g, 1), restrict_to_harmonics(h, g, 2)};
}

struct EquivarianceCheck {
  std::size_t index = 0;
  HarmonicRepresentation rho;
  bool alpha_equivariant = false;
  bool obstruction_equivariant = false;
  bool ideal_invariant = false;
  int max_degree_checked = 0;
  /// First monomial where an identity fails.
  std::string witness{};
  bool passed() const { return alpha_equivariant && obstruction_equivariant && ideal_invariant; }
};

struct EquivarianceReport {
  std::vector<EquivarianceCheck> generators;
  bool passed() const {
    return std::all_of(generators.begin(), generators.end(), [](const EquivarianceCheck& c) { return c.passed(); });
  }
};

namespace detail {

template <class Coeff>
std::string first_difference(const TruncatedSeries<Coeff>& a, const TruncatedSeries<Coeff>& b) {
  const TruncatedSeries<Coeff> diff = a - b;
  if (diff.is_zero()) return {};
  return monomial_string(a.parameters(), diff.terms().begin()->first);
}

inline void require_family_matches(const HodgeData& h, const KuranishiFamily& f) {
  if (f.parameters.size() != h.harmonic_dim(1))
    throw InputError("family has " + std::to_string(f.parameters.size()) + " parameters but H^1 has dimension " +
                     std::to_string(h.harmonic_dim(1)));
  if (f.obstruction.zero().size() != h.harmonic_dim(2)) throw InputError("family obstruction does not match H^2");
}

/// Every transformed generator is a combination of the nonzero generators.
inline bool ideal_maps_into_itself(const KuranishiFamily& f, const CoordinateSeries& transformed, const Matrix& rho2) {
  for (std::size_t c = 0; c < rho2.rows(); ++c) {
    Polynomial image = coordinate_polynomial(transformed, c);
    Polynomial combination(f.parameters, f.order, Scalar(0));
    for (std::size_t n = 0; n < f.generator_indices.size(); ++n)
      combination += f.ideal_generators[n] * rho2(c, f.generator_indices[n]);
    if (!(image == combination)) return false;
  }
  return true;
}

}  // namespace detail

/// For each generator g with harmonic representation (ρ¹, ρ²), verifies
/// g·α(t) = α(ρ¹ t), ob(ρ¹ t) = ρ² ob(t), and that the generator set of the
/// obstruction ideal is mapped into its own span.
inline EquivarianceReport check_family_equivariance(const DgLa& L, const HodgeData& h, const KuranishiFamily& f,
                                                    const GroupAction& action) {
  detail::require_family_matches(h, f);
  EquivarianceReport report;
  for (std::size_t n = 0; n < action.generators.size(); ++n) {
    const GradedOperator& g = action.generators[n];
    detail::require_degree_preserving(L.space(), g);
    EquivarianceCheck c{n, induced_harmonic_action(h, g)};
    c.max_degree_checked = f.order;
    if (f.trivial()) {
      c.alpha_equivariant = c.obstruction_equivariant = c.ideal_invariant = true;
      report.generators.push_back(std::move(c));
      continue;
    }
    const GradedSeries acted = apply_operator(g, f.alpha);
    const GradedSeries substituted = substitute_linear(f.alpha, c.rho.degree1);
    c.alpha_equivariant = acted == substituted;
    if (!c.alpha_equivariant) c.witness = detail::first_difference(acted, substituted);

    const CoordinateSeries ob_substituted = substitute_linear(f.obstruction, c.rho.degree1);
    const CoordinateSeries ob_acted = apply_matrix(c.rho.degree2, f.obstruction);
    c.obstruction_equivariant = ob_substituted == ob_acted;
    if (!c.obstruction_equivariant && c.witness.empty()) c.witness = detail::first_difference(ob_substituted, ob_acted);
    c.ideal_invariant = detail::ideal_maps_into_itself(f, ob_substituted, c.rho.degree2);
    report.generators.push_back(std::move(c));
  }
  return report;
}

/// Linearized equivariance for derivations X with harmonic restriction
/// (ρ¹, ρ²): X·α = Σ_i (ρ¹ t)_i ∂α/∂t_i and ρ²·ob = Σ_i (ρ¹ t)_i ∂ob/∂t_i.
inline EquivarianceReport check_infinitesimal_equivariance(const DgLa& L, const HodgeData& h, const KuranishiFamily& f,
                                                           const InfinitesimalAction& action) {
  detail::require_family_matches(h, f);
  EquivarianceReport report;
  for (std::size_t n = 0; n < action.derivations.size(); ++n) {
    const GradedOperator& x = action.derivations[n];
    detail::require_degree_preserving(L.space(), x);
    EquivarianceCheck c{n, induced_harmonic_action(h, x)};
    c.max_degree_checked = f.order;
    if (f.trivial()) {
      c.alpha_equivariant = c.obstruction_equivariant = c.ideal_invariant = true;
      report.generators.push_back(std::move(c));
      continue;
    }
    const GradedSeries acted = apply_operator(x, f.alpha);
    const GradedSeries flowed = linear_vector_field(f.alpha, c.rho.degree1);
    c.alpha_equivariant = acted == flowed;
    if (!c.alpha_equivariant) c.witness = detail::first_difference(acted, flowed);
    const CoordinateSeries ob_flowed = linear_vector_field(f.obstruction, c.rho.degree1);
    const CoordinateSeries ob_acted = apply_matrix(c.rho.degree2, f.obstruction);
    c.obstruction_equivariant = ob_flowed == ob_acted;
    if (!c.obstruction_equivariant && c.witness.empty()) c.witness = detail::first_difference(ob_flowed, ob_acted);
    c.ideal_invariant = detail::ideal_maps_into_itself(f, ob_flowed, c.rho.degree2);
    report.generators.push_back(std::move(c));
  }
  return report;
}

/// mc_residual(g·s) == g·mc_residual(s).
inline bool mc_commutes_with(const DgLa& L, const GradedOperator& g, const GradedSeries& s) {
  return mc_residual(L, apply_operator(g, s)) == apply_operator(g, mc_residual(L, s));
}

}  // namespace kforge
