#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "kforge/dgla.hpp"
#include "kforge/errors.hpp"
#include "kforge/matrix.hpp"

namespace kforge {

using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Graded-lexicographic order: lower total degree first; within a degree,
/// lexicographically larger exponent first (t1² before t1·t2 before t2²).
struct GrlexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return b < a;
  }
};

inline std::string monomial_string(const std::vector<std::string>& params, const Exponent& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += params[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

/// Polynomial in commuting parameters t1..tm with coefficients in a vector
/// space, truncated at total degree `order` and without constant term.
/// Coeff needs is_zero(), +=, -=, *= Scalar and ==.
template <class Coeff>
class TruncatedSeries {
 public:
  using Terms = std::map<Exponent, Coeff, GrlexLess>;

  TruncatedSeries() = default;
  TruncatedSeries(std::vector<std::string> parameters, int order, Coeff zero)
      : parameters_(std::move(parameters)), order_(order), zero_(std::move(zero)) {
    if (order_ < 1) throw InputError("truncation order must be at least 1, got " + std::to_string(order_));
  }

  const std::vector<std::string>& parameters() const { return parameters_; }
  std::size_t parameter_count() const { return parameters_.size(); }
  int order() const { return order_; }
  const Coeff& zero() const { return zero_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c·t^e. Terms of total degree above the order are dropped;
  /// degree-zero terms are rejected.
  void add_term(const Exponent& e, const Coeff& c) {
    if (e.size() != parameters_.size())
      throw InputError("exponent has " + std::to_string(e.size()) + " entries, expected " + std::to_string(parameters_.size()));
    if (std::any_of(e.begin(), e.end(), [](int x) { return x < 0; })) throw InputError("negative exponent");
    const int deg = total_degree(e);
    if (deg == 0) throw InputError("series terms must have positive total degree");
    if (deg > order_ || c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  Coeff coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? zero_ : it->second;
  }

  /// A series with the same parameters, order and coefficient shape.
  TruncatedSeries empty_like() const { return TruncatedSeries(parameters_, order_, zero_); }

  TruncatedSeries homogeneous_part(int k) const {
    TruncatedSeries out = empty_like();
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == k) out.terms_.emplace(e, c);
    return out;
  }
  /// Terms of total degree ≤ k, keeping the declared order.
  TruncatedSeries up_to(int k) const {
    TruncatedSeries out = empty_like();
    for (const auto& [e, c] : terms_)
      if (total_degree(e) <= k) out.terms_.emplace(e, c);
    return out;
  }

  void require_compatible(const TruncatedSeries& o) const {
    if (o.parameters_ != parameters_) throw InputError("series parameter lists differ");
    if (o.order_ != order_)
      throw InputError("series truncation orders differ: " + std::to_string(order_) + " vs " + std::to_string(o.order_));
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    require_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    require_compatible(o);
    for (const auto& [e, c] : o.terms_) {
      Coeff neg = c;
      neg *= Scalar(-1);
      add_term(e, neg);
    }
    return *this;
  }
  TruncatedSeries& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const Scalar& s) { return a *= s; }
  friend TruncatedSeries operator*(const Scalar& s, TruncatedSeries a) { return a *= s; }
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.parameters_ == b.parameters_ && a.order_ == b.order_ && a.terms_ == b.terms_;
  }

 private:
  std::vector<std::string> parameters_;
  int order_ = 1;
  Coeff zero_{};
  Terms terms_;
};

using GradedSeries = TruncatedSeries<GradedElement>;
using CoordinateSeries = TruncatedSeries<Vector>;
using Polynomial = TruncatedSeries<Scalar>;

/// Default parameter names: "t" for a single parameter, t1..tm otherwise.
inline std::vector<std::string> default_parameters(std::size_t m) {
  if (m == 1) return {"t"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("t" + std::to_string(i + 1));
  return names;
}

inline Exponent unit_exponent(std::size_t m, std::size_t i, int power = 1) {
  Exponent e(m, 0);
  e[i] = power;
  return e;
}

/// Applies a linear map coefficient-wise, producing a series with a new
/// coefficient type.
template <class Out, class In, class F>
TruncatedSeries<Out> map_coefficients(const TruncatedSeries<In>& s, Out zero, F&& f) {
  TruncatedSeries<Out> out(s.parameters(), s.order(), std::move(zero));
  for (const auto& [e, c] : s.terms()) out.add_term(e, f(c));
  return out;
}

namespace detail {

using ScalarPoly = std::map<Exponent, Scalar, GrlexLess>;

inline ScalarPoly multiply_truncated(const ScalarPoly& a, const ScalarPoly& b, int order) {
  ScalarPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      if (total_degree(e) > order) continue;
      auto [it, inserted] = out.try_emplace(e, ca * cb);
      if (!inserted) it->second += ca * cb;
      if (it->second.is_zero()) out.erase(it);
    }
  return out;
}

}  // namespace detail

/// Formal substitution t ← R·t, i.e. s'(t) = s(R t), re-expanded and
/// truncated at the series order.
template <class Coeff>
TruncatedSeries<Coeff> substitute_linear(const TruncatedSeries<Coeff>& s, const Matrix& r) {
  const std::size_t m = s.parameter_count();
  if (r.rows() != m || r.cols() != m)
    throw InputError("substitution matrix is " + r.shape_string() + " but the series has " + std::to_string(m) + " parameters");
  // powers[i][k] = (Σ_j R_ij t_j)^k
  std::vector<std::vector<detail::ScalarPoly>> powers(m);
  for (std::size_t i = 0; i < m; ++i) {
    detail::ScalarPoly linear;
    for (std::size_t j = 0; j < m; ++j)
      if (!r(i, j).is_zero()) linear.emplace(unit_exponent(m, j), r(i, j));
    detail::ScalarPoly one;
    one.emplace(Exponent(m, 0), Scalar(1));
    powers[i].push_back(std::move(one));
    powers[i].push_back(std::move(linear));
  }
  auto power = [&](std::size_t i, int k) -> const detail::ScalarPoly& {
    while (static_cast<int>(powers[i].size()) <= k)
      powers[i].push_back(detail::multiply_truncated(powers[i].back(), powers[i][1], s.order()));
    return powers[i][static_cast<std::size_t>(k)];
  };

  TruncatedSeries<Coeff> out = s.empty_like();
  for (const auto& [e, c] : s.terms()) {
    detail::ScalarPoly expanded;
    expanded.emplace(Exponent(m, 0), Scalar(1));
    for (std::size_t i = 0; i < m && !expanded.empty(); ++i)
      if (e[i] > 0) expanded = detail::multiply_truncated(expanded, power(i, e[i]), s.order());
    for (const auto& [ee, coeff] : expanded) {
      Coeff term = c;
      term *= coeff;
      out.add_term(ee, term);
    }
  }
  return out;
}

/// Exact evaluation at a parameter point.
template <class Coeff>
Coeff evaluate_series(const TruncatedSeries<Coeff>& s, const std::vector<Scalar>& point) {
  if (point.size() != s.parameter_count())
    throw InputError("evaluation point has " + std::to_string(point.size()) + " entries, expected " +
                     std::to_string(s.parameter_count()));
  Coeff out = s.zero();
  for (const auto& [e, c] : s.terms()) {
    Scalar value = 1;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) value *= point[i];
    if (value.is_zero()) continue;
    Coeff term = c;
    term *= value;
    out += term;
  }
  return out;
}

/// The derivation Σ_i (R t)_i ∂s/∂t_i: the derivative of s(exp(εR) t) at
/// ε = 0. Preserves total degree.
template <class Coeff>
TruncatedSeries<Coeff> linear_vector_field(const TruncatedSeries<Coeff>& s, const Matrix& r) {
  const std::size_t m = s.parameter_count();
  if (r.rows() != m || r.cols() != m)
    throw InputError("vector field matrix is " + r.shape_string() + " but the series has " + std::to_string(m) + " parameters");
  TruncatedSeries<Coeff> out = s.empty_like();
  for (const auto& [e, c] : s.terms())
    for (std::size_t i = 0; i < m; ++i) {
      if (e[i] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (r(i, j).is_zero()) continue;
        Exponent shifted = e;
        --shifted[i];
        ++shifted[j];
        Coeff term = c;
        term *= Scalar(e[i]) * r(i, j);
        out.add_term(shifted, term);
      }
    }
  return out;
}

/// Extracts one coordinate of a vector-valued series as a scalar polynomial.
inline Polynomial coordinate_polynomial(const CoordinateSeries& s, std::size_t index) {
  Polynomial out(s.parameters(), s.order(), Scalar(0));
  for (const auto& [e, c] : s.terms()) out.add_term(e, c[index]);
  return out;
}

/// Coefficient-wise application of a graded operator.
inline GradedSeries apply_operator(const GradedOperator& op, const GradedSeries& s) {
  GradedSeries out(s.parameters(), s.order(), GradedElement::zero(op.space()));
  for (const auto& [e, c] : s.terms()) out.add_term(e, op.apply(c));
  return out;
}

/// Coefficient-wise application of a matrix to a vector-valued series.
inline CoordinateSeries apply_matrix(const Matrix& m, const CoordinateSeries& s) {
  return map_coefficients(s, Vector(m.rows()), [&](const Vector& v) { return m * v; });
}

/// Part of [s, s'] of total degree exactly k.
inline GradedSeries series_bracket_homogeneous(const DgLa& L, const GradedSeries& a, const GradedSeries& b, int k) {
  a.require_compatible(b);
  GradedSeries out = a.empty_like();
  for (const auto& [ea, ca] : a.terms()) {
    const int da = total_degree(ea);
    if (da >= k) break;
    for (const auto& [eb, cb] : b.terms()) {
      const int db = total_degree(eb);
      if (da + db < k) continue;
      if (da + db > k) break;
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, L.bracket(ca, cb));
    }
  }
  return out;
}

/// [s, s'] extended bilinearly over the parameters (which are even and
/// central), truncated at the common order.
inline GradedSeries series_bracket(const DgLa& L, const GradedSeries& a, const GradedSeries& b) {
  a.require_compatible(b);
  GradedSeries out = a.empty_like();
  for (const auto& [ea, ca] : a.terms()) {
    const int da = total_degree(ea);
    for (const auto& [eb, cb] : b.terms()) {
      if (da + total_degree(eb) > a.order()) break;
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, L.bracket(ca, cb));
    }
  }
  return out;
}

/// True if every coefficient lives in degree q.
inline bool series_concentrated_in(const GradedSeries& s, int q) {
  return std::all_of(s.terms().begin(), s.terms().end(), [&](const auto& t) { return t.second.concentrated_in(q); });
}

}  // namespace kforge
