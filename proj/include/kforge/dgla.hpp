#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kforge/errors.hpp"
#include "kforge/matrix.hpp"

namespace kforge {

/// Sign (-1)^n as an int.
constexpr int parity_sign(long n) { return (n % 2 == 0) ? 1 : -1; }

/// Finite graded vector space concentrated in [min_degree, max_degree].
/// Degrees outside the window are zero.
struct GradedSpace {
  int min_degree = 0;
  int max_degree = -1;
  std::vector<std::size_t> dims;
  std::vector<std::vector<std::string>> basis_names;

  GradedSpace() = default;
  GradedSpace(int min_deg, std::vector<std::vector<std::string>> names)
      : min_degree(min_deg), max_degree(min_deg + static_cast<int>(names.size()) - 1), basis_names(std::move(names)) {
    for (const auto& n : basis_names) dims.push_back(n.size());
    check();
  }

  /// Throws InputError unless dims and names are consistent and names are
  /// unique within each degree.
  void check() const {
    const auto count = static_cast<std::size_t>(std::max(0, max_degree - min_degree + 1));
    if (dims.size() != count) throw InputError("dims has " + std::to_string(dims.size()) + " entries, expected " + std::to_string(count));
    if (basis_names.size() != count) throw InputError("basis has " + std::to_string(basis_names.size()) + " degrees, expected " + std::to_string(count));
    for (std::size_t k = 0; k < count; ++k) {
      if (basis_names[k].size() != dims[k])
        throw InputError("basis names in degree " + std::to_string(min_degree + static_cast<int>(k)) + " do not match dims");
      std::set<std::string> seen(basis_names[k].begin(), basis_names[k].end());
      if (seen.size() != basis_names[k].size())
        throw InputError("duplicate basis name in degree " + std::to_string(min_degree + static_cast<int>(k)));
    }
  }

  int degree_count() const { return std::max(0, max_degree - min_degree + 1); }
  bool contains(int q) const { return q >= min_degree && q <= max_degree; }
  std::size_t dim(int q) const { return contains(q) ? dims[static_cast<std::size_t>(q - min_degree)] : 0; }
  std::size_t total_dim() const {
    std::size_t n = 0;
    for (auto d : dims) n += d;
    return n;
  }
  /// Index of the first basis vector of degree q in the concatenated basis.
  std::size_t offset(int q) const {
    std::size_t n = 0;
    for (int p = min_degree; p < q && p <= max_degree; ++p) n += dim(p);
    return n;
  }
  const std::string& name(int q, std::size_t i) const { return basis_names[static_cast<std::size_t>(q - min_degree)][i]; }

  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;
};

/// An element of a GradedSpace: one coordinate vector per degree.
class GradedElement {
 public:
  GradedElement() = default;

  static GradedElement zero(const GradedSpace& space) {
    GradedElement e;
    e.min_degree_ = space.min_degree;
    for (auto d : space.dims) e.parts_.emplace_back(d);
    return e;
  }
  /// The i-th basis vector of degree q.
  static GradedElement basis(const GradedSpace& space, int q, std::size_t i) {
    if (!space.contains(q) || i >= space.dim(q)) throw InputError("basis index out of range");
    GradedElement e = zero(space);
    e.part(q)[i] = 1;
    return e;
  }
  static GradedElement homogeneous(const GradedSpace& space, int q, const Vector& v) {
    GradedElement e = zero(space);
    if (!space.contains(q) || v.size() != space.dim(q)) throw InputError("homogeneous element shape mismatch");
    e.part(q) = v;
    return e;
  }

  int min_degree() const { return min_degree_; }
  int max_degree() const { return min_degree_ + static_cast<int>(parts_.size()) - 1; }
  bool has_degree(int q) const { return q >= min_degree_ && q <= max_degree(); }

  Vector& part(int q) {
    if (!has_degree(q)) throw InputError("degree " + std::to_string(q) + " outside element window");
    return parts_[static_cast<std::size_t>(q - min_degree_)];
  }
  const Vector& part(int q) const {
    if (!has_degree(q)) throw InputError("degree " + std::to_string(q) + " outside element window");
    return parts_[static_cast<std::size_t>(q - min_degree_)];
  }

  bool conforms(const GradedSpace& space) const {
    if (space.min_degree != min_degree_ || static_cast<int>(parts_.size()) != space.degree_count()) return false;
    for (std::size_t k = 0; k < parts_.size(); ++k)
      if (parts_[k].size() != space.dims[k]) return false;
    return true;
  }

  bool is_zero() const {
    return std::all_of(parts_.begin(), parts_.end(), [](const Vector& v) { return v.is_zero(); });
  }
  /// The unique degree carrying nonzero coordinates, if there is exactly one.
  std::optional<int> homogeneous_degree() const {
    std::optional<int> deg;
    for (int q = min_degree_; q <= max_degree(); ++q)
      if (!part(q).is_zero()) {
        if (deg) return std::nullopt;
        deg = q;
      }
    return deg;
  }
  /// True if every nonzero coordinate lives in degree q.
  bool concentrated_in(int q) const {
    for (int p = min_degree_; p <= max_degree(); ++p)
      if (p != q && !part(p).is_zero()) return false;
    return true;
  }

  GradedElement& operator+=(const GradedElement& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < parts_.size(); ++k) parts_[k] += o.parts_[k];
    return *this;
  }
  GradedElement& operator-=(const GradedElement& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < parts_.size(); ++k) parts_[k] -= o.parts_[k];
    return *this;
  }
  GradedElement& operator*=(const Scalar& s) {
    for (auto& p : parts_) p *= s;
    return *this;
  }
  friend GradedElement operator+(GradedElement a, const GradedElement& b) { return a += b; }
  friend GradedElement operator-(GradedElement a, const GradedElement& b) { return a -= b; }
  friend GradedElement operator*(GradedElement a, const Scalar& s) { return a *= s; }
  friend GradedElement operator*(const Scalar& s, GradedElement a) { return a *= s; }
  friend bool operator==(const GradedElement& a, const GradedElement& b) {
    return a.min_degree_ == b.min_degree_ && a.parts_ == b.parts_;
  }

 private:
  void require_same_shape(const GradedElement& o) const {
    if (o.min_degree_ != min_degree_ || o.parts_.size() != parts_.size()) throw InputError("graded element shape mismatch");
    for (std::size_t k = 0; k < parts_.size(); ++k)
      if (o.parts_[k].size() != parts_[k].size()) throw InputError("graded element shape mismatch");
  }

  int min_degree_ = 0;
  std::vector<Vector> parts_;
};

/// A linear map of fixed degree shift between graded pieces: block(q) maps
/// degree q to degree q + shift. Blocks whose target lies outside the space
/// have zero rows.
class GradedOperator {
 public:
  GradedOperator() = default;
  GradedOperator(const GradedSpace& space, int shift, std::vector<Matrix> blocks)
      : space_(space), shift_(shift), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != space_.degree_count())
      throw InputError("operator has " + std::to_string(blocks_.size()) + " blocks, expected " +
                       std::to_string(space_.degree_count()));
    for (int q = space_.min_degree; q <= space_.max_degree; ++q) {
      const Matrix& b = block(q);
      if (b.rows() != space_.dim(q + shift_) || b.cols() != space_.dim(q))
        throw InputError("operator block for degree " + std::to_string(q) + " has shape " + b.shape_string() +
                         ", expected " + std::to_string(space_.dim(q + shift_)) + "x" + std::to_string(space_.dim(q)));
    }
  }

  static GradedOperator zero(const GradedSpace& space, int shift) {
    std::vector<Matrix> blocks;
    for (int q = space.min_degree; q <= space.max_degree; ++q) blocks.emplace_back(space.dim(q + shift), space.dim(q));
    return GradedOperator(space, shift, std::move(blocks));
  }
  static GradedOperator identity(const GradedSpace& space) {
    std::vector<Matrix> blocks;
    for (auto d : space.dims) blocks.push_back(Matrix::identity(d));
    return GradedOperator(space, 0, std::move(blocks));
  }

  const GradedSpace& space() const { return space_; }
  int shift() const { return shift_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  /// Block acting on degree q; an empty matrix outside the space.
  const Matrix& block(int q) const {
    static const Matrix empty;
    if (!space_.contains(q)) return empty;
    return blocks_[static_cast<std::size_t>(q - space_.min_degree)];
  }

  GradedElement apply(const GradedElement& a) const {
    if (!a.conforms(space_)) throw InputError("operator applied to element of a different graded space");
    GradedElement out = GradedElement::zero(space_);
    for (int q = space_.min_degree; q <= space_.max_degree; ++q) {
      if (!space_.contains(q + shift_) || space_.dim(q + shift_) == 0) continue;
      out.part(q + shift_) += block(q) * a.part(q);
    }
    return out;
  }

  /// (this ∘ other).
  GradedOperator after(const GradedOperator& other) const {
    if (!(other.space_ == space_)) throw InputError("composing operators on different spaces");
    std::vector<Matrix> blocks;
    for (int q = space_.min_degree; q <= space_.max_degree; ++q) {
      int mid = q + other.shift_;
      if (!space_.contains(mid)) {
        blocks.emplace_back(space_.dim(mid + shift_), space_.dim(q));
        continue;
      }
      blocks.push_back(block(mid) * other.block(q));
    }
    return GradedOperator(space_, shift_ + other.shift_, std::move(blocks));
  }

  GradedOperator& operator+=(const GradedOperator& o) {
    require_compatible(o);
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += o.blocks_[k];
    return *this;
  }
  GradedOperator& operator-=(const GradedOperator& o) {
    require_compatible(o);
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= o.blocks_[k];
    return *this;
  }
  GradedOperator& operator*=(const Scalar& s) {
    for (auto& b : blocks_) b *= s;
    return *this;
  }
  friend GradedOperator operator+(GradedOperator a, const GradedOperator& b) { return a += b; }
  friend GradedOperator operator-(GradedOperator a, const GradedOperator& b) { return a -= b; }
  friend GradedOperator operator*(GradedOperator a, const Scalar& s) { return a *= s; }
  friend bool operator==(const GradedOperator& a, const GradedOperator& b) {
    return a.space_ == b.space_ && a.shift_ == b.shift_ && a.blocks_ == b.blocks_;
  }

  bool is_zero() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const Matrix& m) { return m.is_zero(); });
  }

 private:
  void require_compatible(const GradedOperator& o) const {
    if (!(o.space_ == space_) || o.shift_ != shift_) throw InputError("operator shape mismatch");
  }

  GradedSpace space_;
  int shift_ = 0;
  std::vector<Matrix> blocks_;
};

/// Structure constant: [e_i^(p), e_j^(q)] contains c · e_k^(p+q).
struct BracketEntry {
  int p = 0;
  std::size_t i = 0;
  int q = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  Scalar c;

  auto key() const { return std::tie(p, i, q, j, k); }
  friend bool operator==(const BracketEntry& a, const BracketEntry& b) { return a.key() == b.key() && a.c == b.c; }
};

/// Sparse vector over the concatenated basis, used by the axiom checks.
using SparseVector = std::map<std::size_t, Scalar>;

inline void sparse_axpy(SparseVector& acc, const Scalar& factor, const SparseVector& x) {
  for (const auto& [idx, val] : x) {
    auto [it, inserted] = acc.try_emplace(idx, factor * val);
    if (!inserted) {
      it->second += factor * val;
      if (it->second.is_zero()) acc.erase(it);
    } else if (it->second.is_zero()) {
      acc.erase(it);
    }
  }
}

/// A finite-dimensional differential graded Lie algebra given by its
/// differential matrices and sparse bracket structure constants. Construction
/// checks shapes only; the algebraic axioms are checked by validate_dgla.
class DgLa {
 public:
  DgLa() = default;
  DgLa(GradedSpace space, std::vector<Matrix> differential, std::vector<BracketEntry> bracket)
      : space_(checked(std::move(space))), differential_(space_, 1, std::move(differential)) {
    std::map<std::tuple<int, std::size_t, int, std::size_t, std::size_t>, Scalar> merged;
    for (const auto& e : bracket) {
      auto where = "bracket entry (" + std::to_string(e.p) + "," + std::to_string(e.i) + "," + std::to_string(e.q) + "," +
                   std::to_string(e.j) + "," + std::to_string(e.k) + ")";
      if (!space_.contains(e.p) || !space_.contains(e.q)) throw InputError(where + ": source degree out of range");
      if (e.i >= space_.dim(e.p) || e.j >= space_.dim(e.q)) throw InputError(where + ": source index out of range");
      if (e.c.is_zero()) continue;
      if (!space_.contains(e.p + e.q))
        throw InputError(where + ": nonzero bracket lands in degree " + std::to_string(e.p + e.q) + " outside the space");
      if (e.k >= space_.dim(e.p + e.q)) throw InputError(where + ": target index out of range");
      merged[e.key()] += e.c;
    }
    for (auto& [key, c] : merged) {
      if (c.is_zero()) continue;
      auto [p, i, q, j, k] = key;
      bracket_.push_back({p, i, q, j, k, c});
    }
    by_left_.assign(space_.total_dim(), {});
    for (std::size_t n = 0; n < bracket_.size(); ++n) by_left_[global(bracket_[n].p, bracket_[n].i)].push_back(n);
  }

  const GradedSpace& space() const { return space_; }
  const GradedOperator& differential() const { return differential_; }
  const std::vector<BracketEntry>& bracket_constants() const { return bracket_; }
  bool is_abelian() const { return bracket_.empty(); }

  std::size_t global(int q, std::size_t i) const { return space_.offset(q) + i; }
  std::pair<int, std::size_t> local(std::size_t g) const {
    for (int q = space_.min_degree; q <= space_.max_degree; ++q) {
      if (g < space_.dim(q)) return {q, g};
      g -= space_.dim(q);
    }
    throw InputError("global basis index out of range");
  }
  int degree_of(std::size_t g) const { return local(g).first; }

  /// Bilinear extension of the structure constants.
  GradedElement bracket(const GradedElement& a, const GradedElement& b) const {
    if (!a.conforms(space_) || !b.conforms(space_)) throw InputError("bracket arguments do not conform to the dgLa space");
    GradedElement out = GradedElement::zero(space_);
    for (int p = space_.min_degree; p <= space_.max_degree; ++p) {
      const Vector& ap = a.part(p);
      for (std::size_t i = 0; i < ap.size(); ++i) {
        if (ap[i].is_zero()) continue;
        for (std::size_t n : by_left_[global(p, i)]) {
          const BracketEntry& e = bracket_[n];
          const Scalar& bj = b.part(e.q)[e.j];
          if (bj.is_zero()) continue;
          out.part(e.p + e.q)[e.k] += e.c * ap[i] * bj;
        }
      }
    }
    return out;
  }

  GradedElement apply_differential(const GradedElement& a) const { return differential_.apply(a); }

  /// [e_a, e_b] on global basis indices, as a sparse vector.
  SparseVector basis_bracket(std::size_t a, std::size_t b) const {
    SparseVector out;
    const auto [q, j] = local(b);
    for (std::size_t n : by_left_[a]) {
      const BracketEntry& e = bracket_[n];
      if (e.q != q || e.j != j) continue;
      sparse_axpy(out, e.c, SparseVector{{global(e.p + e.q, e.k), Scalar(1)}});
    }
    return out;
  }

  GradedElement to_element(const SparseVector& v) const {
    GradedElement e = GradedElement::zero(space_);
    for (const auto& [g, val] : v) {
      auto [q, i] = local(g);
      e.part(q)[i] = val;
    }
    return e;
  }

  friend bool operator==(const DgLa& a, const DgLa& b) {
    return a.space_ == b.space_ && a.differential_ == b.differential_ && a.bracket_ == b.bracket_;
  }

 private:
  static GradedSpace checked(GradedSpace s) {
    s.check();
    return s;
  }

  GradedSpace space_;
  GradedOperator differential_;
  std::vector<BracketEntry> bracket_;
  std::vector<std::vector<std::size_t>> by_left_;
};

struct AxiomCheck {
  std::string axiom;
  bool passed = true;
  bool skipped = false;
  /// Basis tuple of the first failure, e.g. "(x, y)".
  std::string witness{};
  std::optional<GradedElement> defect{};
};

struct DglaReport {
  std::vector<AxiomCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
  }
  const AxiomCheck& check(const std::string& axiom) const {
    for (const auto& c : checks)
      if (c.axiom == axiom) return c;
    throw InputError("no axiom named " + axiom);
  }
};

struct ValidateOptions {
  bool skip_jacobi = false;
};

namespace detail {

class BasisTables {
 public:
  explicit BasisTables(const DgLa& L) : L_(L), n_(L.space().total_dim()), brackets_(n_ * n_), diff_(n_) {
    for (const auto& e : L.bracket_constants()) {
      auto& slot = brackets_[L.global(e.p, e.i) * n_ + L.global(e.q, e.j)];
      sparse_axpy(slot, e.c, SparseVector{{L.global(e.p + e.q, e.k), Scalar(1)}});
    }
    for (int q = L.space().min_degree; q <= L.space().max_degree; ++q) {
      const Matrix& d = L.differential().block(q);
      for (std::size_t j = 0; j < d.cols(); ++j)
        for (std::size_t i = 0; i < d.rows(); ++i)
          if (!d(i, j).is_zero()) diff_[L.global(q, j)][L.global(q + 1, i)] = d(i, j);
    }
    for (std::size_t g = 0; g < n_; ++g) degree_.push_back(L.degree_of(g));
  }

  std::size_t size() const { return n_; }
  int degree(std::size_t g) const { return degree_[g]; }
  const SparseVector& bracket(std::size_t a, std::size_t b) const { return brackets_[a * n_ + b]; }
  const SparseVector& d(std::size_t a) const { return diff_[a]; }

  SparseVector bracket_left(std::size_t a, const SparseVector& x) const {
    SparseVector out;
    for (const auto& [b, val] : x) sparse_axpy(out, val, bracket(a, b));
    return out;
  }
  SparseVector bracket_right(const SparseVector& x, std::size_t b) const {
    SparseVector out;
    for (const auto& [a, val] : x) sparse_axpy(out, val, bracket(a, b));
    return out;
  }
  SparseVector apply_d(const SparseVector& x) const {
    SparseVector out;
    for (const auto& [a, val] : x) sparse_axpy(out, val, d(a));
    return out;
  }
  std::string name(std::size_t g) const {
    auto [q, i] = L_.local(g);
    return L_.space().name(q, i);
  }

 private:
  const DgLa& L_;
  std::size_t n_;
  std::vector<SparseVector> brackets_;
  std::vector<SparseVector> diff_;
  std::vector<int> degree_;
};

}  // namespace detail

/// Checks d∘d = 0, graded antisymmetry, the graded Jacobi identity and the
/// graded Leibniz rule on basis tuples, in lexicographic tuple order. Each
/// failing axiom reports its first witness and the nonzero defect.
inline DglaReport validate_dgla(const DgLa& L, ValidateOptions options = {}) {
  const detail::BasisTables t(L);
  const std::size_t n = t.size();
  DglaReport report;

  auto fail = [&](AxiomCheck& check, std::string witness, const SparseVector& defect) {
    check.passed = false;
    check.witness = std::move(witness);
    check.defect = L.to_element(defect);
  };

  AxiomCheck d_squared{"d_squared_zero"};
  for (std::size_t a = 0; a < n && d_squared.passed; ++a) {
    SparseVector dd = t.apply_d(t.d(a));
    if (!dd.empty()) fail(d_squared, "(" + t.name(a) + ")", dd);
  }
  report.checks.push_back(d_squared);

  AxiomCheck antisymmetry{"antisymmetry"};
  for (std::size_t a = 0; a < n && antisymmetry.passed; ++a)
    for (std::size_t b = a; b < n; ++b) {
      SparseVector defect = t.bracket(a, b);
      sparse_axpy(defect, Scalar(parity_sign(t.degree(a) * t.degree(b))), t.bracket(b, a));
      if (!defect.empty()) {
        fail(antisymmetry, "(" + t.name(a) + ", " + t.name(b) + ")", defect);
        break;
      }
    }
  report.checks.push_back(antisymmetry);

  AxiomCheck jacobi{"jacobi"};
  if (options.skip_jacobi) {
    jacobi.skipped = true;
  } else if (!L.is_abelian()) {
    for (std::size_t a = 0; a < n && jacobi.passed; ++a)
      for (std::size_t b = 0; b < n && jacobi.passed; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          const int da = t.degree(a), db = t.degree(b), dc = t.degree(c);
          if (!L.space().contains(da + db + dc)) continue;
          // (-1)^{|a||c|}[a,[b,c]] + (-1)^{|b||a|}[b,[c,a]] + (-1)^{|c||b|}[c,[a,b]]
          SparseVector defect;
          sparse_axpy(defect, Scalar(parity_sign(da * dc)), t.bracket_left(a, t.bracket(b, c)));
          sparse_axpy(defect, Scalar(parity_sign(db * da)), t.bracket_left(b, t.bracket(c, a)));
          sparse_axpy(defect, Scalar(parity_sign(dc * db)), t.bracket_left(c, t.bracket(a, b)));
          if (!defect.empty()) {
            fail(jacobi, "(" + t.name(a) + ", " + t.name(b) + ", " + t.name(c) + ")", defect);
            break;
          }
        }
  }
  report.checks.push_back(jacobi);

  AxiomCheck leibniz{"leibniz"};
  if (!L.is_abelian()) {
    for (std::size_t a = 0; a < n && leibniz.passed; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        // d[a,b] - [da,b] - (-1)^{|a|}[a,db]
        SparseVector defect = t.apply_d(t.bracket(a, b));
        sparse_axpy(defect, Scalar(-1), t.bracket_right(t.d(a), b));
        sparse_axpy(defect, Scalar(-parity_sign(t.degree(a))), t.bracket_left(a, t.d(b)));
        if (!defect.empty()) {
          fail(leibniz, "(" + t.name(a) + ", " + t.name(b) + ")", defect);
          break;
        }
      }
  }
  report.checks.push_back(leibniz);
  return report;
}

}  // namespace kforge
