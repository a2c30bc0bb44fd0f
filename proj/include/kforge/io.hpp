#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kforge/dgla.hpp"
#include "kforge/equivariance.hpp"
#include "kforge/errors.hpp"
#include "kforge/hodge.hpp"
#include "kforge/kuranishi.hpp"
#include "kforge/series.hpp"

namespace kforge::io {

using Json = nlohmann::ordered_json;

inline InputError schema_error(const std::string& path, const std::string& what) {
  return InputError((path.empty() ? std::string("/") : path) + ": " + what);
}

inline const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw schema_error(path, "missing key \"" + key + "\"");
  return j.at(key);
}

inline long require_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw schema_error(path, "expected an integer");
  return j.get<long>();
}

inline const Json& require_array(const Json& j, const std::string& path, std::optional<std::size_t> size = {}) {
  if (!j.is_array()) throw schema_error(path, "expected an array");
  if (size && j.size() != *size)
    throw schema_error(path, "expected " + std::to_string(*size) + " entries, found " + std::to_string(j.size()));
  return j;
}

// ---------------------------------------------------------------- scalars

inline Json to_json(const Scalar& s) { return Json::array({rational_to_string(s.re()), rational_to_string(s.im())}); }

inline mpq_class rational_from_json(const Json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return mpq_class(j.get<long>());
  } catch (const InputError& e) {
    throw schema_error(path, e.what());
  }
  throw schema_error(path, "expected a rational string");
}

/// Accepts ["re", "im"], a bare rational string, or an integer.
inline Scalar scalar_from_json(const Json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) throw schema_error(path, "scalar must be a two-element array [re, im]");
    return Scalar(rational_from_json(j[0], path + "/0"), rational_from_json(j[1], path + "/1"));
  }
  return Scalar(rational_from_json(j, path));
}

// ---------------------------------------------------------------- matrices

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(to_json(s));
  return out;
}

inline Matrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  require_array(j, path, rows);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_path = path + "/" + std::to_string(i);
    require_array(j[i], row_path, cols);
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = scalar_from_json(j[i][c], row_path + "/" + std::to_string(c));
  }
  return m;
}

/// Square matrix whose size is read from the document.
inline Matrix square_matrix_from_json(const Json& j, const std::string& path) {
  require_array(j, path);
  return matrix_from_json(j, j.size(), j.size(), path);
}

inline Vector vector_from_json(const Json& j, std::size_t size, const std::string& path) {
  require_array(j, path, size);
  Vector v(size);
  for (std::size_t i = 0; i < size; ++i) v[i] = scalar_from_json(j[i], path + "/" + std::to_string(i));
  return v;
}

inline std::vector<Matrix> per_degree_square_from_json(const Json& j, const GradedSpace& space, const std::string& path) {
  require_array(j, path, static_cast<std::size_t>(space.degree_count()));
  std::vector<Matrix> out;
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    auto k = static_cast<std::size_t>(q - space.min_degree);
    out.push_back(matrix_from_json(j[k], space.dim(q), space.dim(q), path + "/" + std::to_string(k)));
  }
  return out;
}

inline Json per_degree_to_json(const std::vector<Matrix>& blocks) {
  Json out = Json::array();
  for (const auto& b : blocks) out.push_back(to_json(b));
  return out;
}

// ---------------------------------------------------------------- dgLa

struct DglaDocument {
  DgLa dgla;
  std::optional<MetricData> metric;

  MetricData metric_or_identity() const { return metric ? *metric : MetricData::identity(dgla.space()); }
};

inline Json to_json(const DgLa& L, const std::optional<MetricData>& metric = std::nullopt) {
  const GradedSpace& s = L.space();
  Json j;
  j["scalar"] = "gaussian-rational";
  j["degrees"] = Json{{"min", s.min_degree}, {"max", s.max_degree}};
  j["dims"] = s.dims;
  j["basis"] = s.basis_names;
  j["differential"] = per_degree_to_json(L.differential().blocks());
  Json bracket = Json::array();
  for (const auto& e : L.bracket_constants()) bracket.push_back(Json::array({e.p, e.i, e.q, e.j, e.k, to_json(e.c)}));
  j["bracket"] = std::move(bracket);
  if (metric) j["metric"] = per_degree_to_json(metric->gram);
  return j;
}

inline DglaDocument dgla_from_json(const Json& j) {
  if (!j.is_object()) throw schema_error("", "dgLa document must be an object");
  if (j.contains("scalar") && j["scalar"] != "gaussian-rational")
    throw schema_error("/scalar", "only \"gaussian-rational\" is supported");
  const Json& degrees = require(j, "degrees", "");
  GradedSpace space;
  space.min_degree = static_cast<int>(require_int(require(degrees, "min", "/degrees"), "/degrees/min"));
  space.max_degree = static_cast<int>(require_int(require(degrees, "max", "/degrees"), "/degrees/max"));
  if (space.max_degree < space.min_degree - 1) throw schema_error("/degrees", "max < min - 1");
  const auto count = static_cast<std::size_t>(space.degree_count());

  const Json& dims = require_array(require(j, "dims", ""), "/dims", count);
  for (std::size_t k = 0; k < count; ++k) {
    long d = require_int(dims[k], "/dims/" + std::to_string(k));
    if (d < 0) throw schema_error("/dims/" + std::to_string(k), "negative dimension");
    space.dims.push_back(static_cast<std::size_t>(d));
  }
  const Json& basis = require_array(require(j, "basis", ""), "/basis", count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::string path = "/basis/" + std::to_string(k);
    require_array(basis[k], path, space.dims[k]);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < basis[k].size(); ++i) {
      if (!basis[k][i].is_string()) throw schema_error(path + "/" + std::to_string(i), "expected a string");
      names.push_back(basis[k][i].get<std::string>());
    }
    space.basis_names.push_back(std::move(names));
  }
  try {
    space.check();
  } catch (const InputError& e) {
    throw schema_error("/basis", e.what());
  }

  const Json& diff = require_array(require(j, "differential", ""), "/differential");
  if (diff.size() != count && !(count > 0 && diff.size() == count - 1))
    throw schema_error("/differential", "expected one matrix per degree");
  std::vector<Matrix> differential;
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    auto k = static_cast<std::size_t>(q - space.min_degree);
    if (k >= diff.size()) {
      differential.emplace_back(space.dim(q + 1), space.dim(q));
      continue;
    }
    differential.push_back(matrix_from_json(diff[k], space.dim(q + 1), space.dim(q), "/differential/" + std::to_string(k)));
  }

  std::vector<BracketEntry> entries;
  const Json& bracket = j.contains("bracket") ? require_array(j["bracket"], "/bracket") : Json::array();
  for (std::size_t n = 0; n < bracket.size(); ++n) {
    const std::string path = "/bracket/" + std::to_string(n);
    const Json& e = require_array(bracket[n], path, 6);
    BracketEntry entry;
    entry.p = static_cast<int>(require_int(e[0], path + "/0"));
    long i = require_int(e[1], path + "/1");
    entry.q = static_cast<int>(require_int(e[2], path + "/2"));
    long jj = require_int(e[3], path + "/3");
    long k = require_int(e[4], path + "/4");
    if (i < 0 || jj < 0 || k < 0) throw schema_error(path, "negative basis index");
    entry.i = static_cast<std::size_t>(i);
    entry.j = static_cast<std::size_t>(jj);
    entry.k = static_cast<std::size_t>(k);
    entry.c = scalar_from_json(e[5], path + "/5");
    if (!space.contains(entry.p) || !space.contains(entry.q))
      throw schema_error(path, "source degree outside [" + std::to_string(space.min_degree) + ", " +
                                   std::to_string(space.max_degree) + "]");
    if (!entry.c.is_zero() && !space.contains(entry.p + entry.q))
      throw schema_error(path, "bracket lands in degree " + std::to_string(entry.p + entry.q) + " outside the space");
    if (entry.i >= space.dim(entry.p) || entry.j >= space.dim(entry.q) ||
        (space.contains(entry.p + entry.q) && entry.k >= space.dim(entry.p + entry.q)))
      throw schema_error(path, "basis index out of range");
    entries.push_back(std::move(entry));
  }

  DglaDocument doc{DgLa(space, std::move(differential), std::move(entries)), std::nullopt};
  if (j.contains("metric") && !j["metric"].is_null()) {
    MetricData m;
    m.min_degree = space.min_degree;
    m.gram = per_degree_square_from_json(j["metric"], space, "/metric");
    doc.metric = std::move(m);
  }
  return doc;
}

// ---------------------------------------------------------------- metric

inline Json metric_to_json(const MetricData& m) {
  Json j;
  j["scalar"] = "gaussian-rational";
  j["metric"] = per_degree_to_json(m.gram);
  return j;
}

/// Accepts {"metric": [...]} or a bare per-degree array.
inline MetricData metric_from_json(const Json& j, const GradedSpace& space) {
  const Json& body = j.is_object() ? require(j, "metric", "") : j;
  MetricData m;
  m.min_degree = space.min_degree;
  m.gram = per_degree_square_from_json(body, space, j.is_object() ? "/metric" : "");
  return m;
}

// ---------------------------------------------------------------- actions

using AnyAction = std::variant<GroupAction, InfinitesimalAction>;

inline std::vector<GradedOperator> operators_from_json(const Json& j, const GradedSpace& space, const std::string& path) {
  require_array(j, path);
  std::vector<GradedOperator> out;
  for (std::size_t n = 0; n < j.size(); ++n)
    out.emplace_back(space, 0, per_degree_square_from_json(j[n], space, path + "/" + std::to_string(n)));
  return out;
}

inline Json to_json(const GroupAction& a) {
  Json j;
  j["kind"] = "finite";
  Json gens = Json::array();
  for (const auto& g : a.generators) gens.push_back(per_degree_to_json(g.blocks()));
  j["generators"] = std::move(gens);
  if (!a.declared_orders.empty()) j["orders"] = a.declared_orders;
  return j;
}

inline Json to_json(const InfinitesimalAction& a) {
  Json j;
  j["kind"] = "infinitesimal";
  Json ders = Json::array();
  for (const auto& x : a.derivations) ders.push_back(per_degree_to_json(x.blocks()));
  j["derivations"] = std::move(ders);
  return j;
}

inline AnyAction action_from_json(const Json& j, const GradedSpace& space) {
  const Json& kind = require(j, "kind", "");
  if (kind == "finite") {
    GroupAction a{operators_from_json(require(j, "generators", ""), space, "/generators"), {}};
    if (j.contains("orders")) {
      const Json& orders = require_array(j["orders"], "/orders", a.generators.size());
      for (std::size_t n = 0; n < orders.size(); ++n)
        a.declared_orders.push_back(static_cast<int>(require_int(orders[n], "/orders/" + std::to_string(n))));
    }
    return a;
  }
  if (kind == "infinitesimal") return InfinitesimalAction{operators_from_json(require(j, "derivations", ""), space, "/derivations")};
  throw schema_error("/kind", "expected \"finite\" or \"infinitesimal\"");
}

// ---------------------------------------------------------------- series

inline Json exponent_to_json(const Exponent& e) { return Json(e); }

inline Exponent exponent_from_json(const Json& j, std::size_t m, const std::string& path) {
  require_array(j, path, m);
  Exponent e;
  for (std::size_t i = 0; i < m; ++i) e.push_back(static_cast<int>(require_int(j[i], path + "/" + std::to_string(i))));
  return e;
}

inline Json to_json(const GradedSeries& s) {
  Json j;
  j["parameters"] = s.parameters();
  j["order"] = s.order();
  Json terms = Json::array();
  for (const auto& [e, c] : s.terms())
    for (int q = c.min_degree(); q <= c.max_degree(); ++q) {
      if (c.part(q).is_zero()) continue;
      terms.push_back(Json{{"exp", exponent_to_json(e)}, {"degree", q}, {"coeff", to_json(c.part(q))}});
    }
  j["terms"] = std::move(terms);
  return j;
}

inline std::pair<std::vector<std::string>, int> series_header(const Json& j, const std::string& path) {
  const Json& params = require_array(require(j, "parameters", path), path + "/parameters");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].is_string()) throw schema_error(path + "/parameters/" + std::to_string(i), "expected a string");
    names.push_back(params[i].get<std::string>());
  }
  int order = static_cast<int>(require_int(require(j, "order", path), path + "/order"));
  if (order < 1) throw schema_error(path + "/order", "order must be at least 1");
  return {names, order};
}

inline GradedSeries graded_series_from_json(const Json& j, const GradedSpace& space, const std::string& path = "") {
  auto [names, order] = series_header(j, path);
  GradedSeries s(names, order, GradedElement::zero(space));
  const Json& terms = require_array(require(j, "terms", path), path + "/terms");
  for (std::size_t n = 0; n < terms.size(); ++n) {
    const std::string tp = path + "/terms/" + std::to_string(n);
    Exponent e = exponent_from_json(require(terms[n], "exp", tp), names.size(), tp + "/exp");
    if (total_degree(e) < 1) throw schema_error(tp + "/exp", "series terms must have positive total degree");
    int q = static_cast<int>(require_int(require(terms[n], "degree", tp), tp + "/degree"));
    if (!space.contains(q)) throw schema_error(tp + "/degree", "degree outside the dgLa");
    Vector v = vector_from_json(require(terms[n], "coeff", tp), space.dim(q), tp + "/coeff");
    try {
      s.add_term(e, GradedElement::homogeneous(space, q, v));
    } catch (const InputError& err) {
      throw schema_error(tp, err.what());
    }
  }
  return s;
}

inline Json polynomial_terms_to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back(Json{{"exp", exponent_to_json(e)}, {"coeff", to_json(c)}});
  return terms;
}

inline Polynomial polynomial_from_json(const Json& terms, const std::vector<std::string>& names, int order,
                                       const std::string& path) {
  Polynomial p(names, order, Scalar(0));
  require_array(terms, path);
  for (std::size_t n = 0; n < terms.size(); ++n) {
    const std::string tp = path + "/" + std::to_string(n);
    Exponent e = exponent_from_json(require(terms[n], "exp", tp), names.size(), tp + "/exp");
    if (total_degree(e) < 1) throw schema_error(tp + "/exp", "terms must have positive total degree");
    p.add_term(e, scalar_from_json(require(terms[n], "coeff", tp), tp + "/coeff"));
  }
  return p;
}

// ---------------------------------------------------------------- family

inline Json to_json(const KuranishiFamily& f, const HodgeData& h, const std::optional<FamilyDiagnostics>& diag) {
  Json j;
  j["parameters"] = f.parameters;
  j["order"] = f.order;
  Json harmonic;
  for (int q : {1, 2}) {
    Json vectors = Json::array();
    for (std::size_t i = 0; i < h.harmonic_dim(q); ++i) vectors.push_back(to_json(h.basis(q).column(i)));
    harmonic[std::to_string(q)] = std::move(vectors);
  }
  j["harmonic_basis"] = std::move(harmonic);
  j["alpha"] = to_json(f.alpha);
  Json ob = Json::array();
  for (std::size_t c = 0; c < f.obstruction.zero().size(); ++c)
    ob.push_back(Json{{"coordinate", c}, {"terms", polynomial_terms_to_json(coordinate_polynomial(f.obstruction, c))}});
  j["obstruction"] = std::move(ob);
  Json gens = Json::array();
  for (std::size_t n = 0; n < f.ideal_generators.size(); ++n) {
    const Polynomial& g = f.ideal_generators[n];
    Json by_order = Json::array();
    for (int k = 1; k <= f.order; ++k) {
      Polynomial part = g.homogeneous_part(k);
      if (!part.is_zero()) by_order.push_back(Json{{"order", k}, {"terms", polynomial_terms_to_json(part)}});
    }
    gens.push_back(Json{{"coordinate", f.generator_indices[n]}, {"terms", polynomial_terms_to_json(g)}, {"by_order", by_order}});
  }
  j["ideal_generators"] = std::move(gens);
  if (diag) {
    j["diagnostics"] = Json{{"harmonic_part", diag->harmonic_part},
                            {"coclosed", diag->coclosed},
                            {"kuranishi_fixed", diag->kuranishi_fixed},
                            {"elliptic", diag->elliptic},
                            {"fixed_point", diag->fixed_point}};
  }
  j["notices"] = f.notices;
  return j;
}

/// Rebuilds a family from its JSON form. The linear part is the total
/// degree-1 part of alpha.
inline KuranishiFamily family_from_json(const Json& j, const GradedSpace& space) {
  KuranishiFamily f;
  auto [names, order] = series_header(j, "");
  f.parameters = names;
  f.order = order;
  f.alpha = graded_series_from_json(require(j, "alpha", ""), space, "/alpha");
  f.alpha.require_compatible(GradedSeries(names, order, GradedElement::zero(space)));
  f.linear_part = f.alpha.homogeneous_part(1);
  const Json& ob = require_array(require(j, "obstruction", ""), "/obstruction");
  const std::size_t h2 = ob.size();
  f.obstruction = CoordinateSeries(names, order, Vector(h2));
  for (std::size_t c = 0; c < h2; ++c) {
    const std::string path = "/obstruction/" + std::to_string(c);
    Polynomial p = polynomial_from_json(require(ob[c], "terms", path), names, order, path + "/terms");
    for (const auto& [e, coeff] : p.terms()) {
      Vector v(h2);
      v[c] = coeff;
      f.obstruction.add_term(e, v);
    }
  }
  const Json& gens = require_array(require(j, "ideal_generators", ""), "/ideal_generators");
  for (std::size_t n = 0; n < gens.size(); ++n) {
    const std::string path = "/ideal_generators/" + std::to_string(n);
    long c = require_int(require(gens[n], "coordinate", path), path + "/coordinate");
    if (c < 0 || static_cast<std::size_t>(c) >= h2) throw schema_error(path + "/coordinate", "out of range");
    f.generator_indices.push_back(static_cast<std::size_t>(c));
    f.ideal_generators.push_back(polynomial_from_json(require(gens[n], "terms", path), names, order, path + "/terms"));
  }
  if (j.contains("notices"))
    for (const auto& n : j["notices"]) f.notices.push_back(n.get<std::string>());
  return f;
}

// ---------------------------------------------------------------- reports

inline Json to_json(const DglaReport& r, const DgLa& L) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json item{{"axiom", c.axiom}, {"passed", c.passed}, {"skipped", c.skipped}};
    if (!c.passed) {
      item["witness"] = c.witness;
      Json defect = Json::array();
      for (int q = L.space().min_degree; q <= L.space().max_degree; ++q)
        if (!c.defect->part(q).is_zero()) defect.push_back(Json{{"degree", q}, {"coeff", to_json(c.defect->part(q))}});
      item["defect"] = std::move(defect);
    }
    checks.push_back(std::move(item));
  }
  return Json{{"passed", r.passed()}, {"axioms", checks}};
}

inline Json to_json(const ActionReport& r) {
  Json gens = Json::array();
  for (const auto& g : r.generators) {
    Json checks = Json::array();
    for (const auto& c : g.checks) {
      Json item{{"condition", c.condition}, {"passed", c.passed}, {"required", c.required}};
      if (!c.passed) item["witness"] = c.witness;
      checks.push_back(std::move(item));
    }
    gens.push_back(Json{{"index", g.index}, {"passed", g.passed()}, {"checks", checks}});
  }
  return Json{{"passed", r.passed()}, {"generators", gens}};
}

inline Json to_json(const EquivarianceReport& r) {
  Json gens = Json::array();
  for (const auto& g : r.generators) {
    Json item{{"index", g.index},
              {"rho1", to_json(g.rho.degree1)},
              {"rho2", to_json(g.rho.degree2)},
              {"alpha_equivariant", g.alpha_equivariant},
              {"obstruction_equivariant", g.obstruction_equivariant},
              {"ideal_invariant", g.ideal_invariant},
              {"max_degree_checked", g.max_degree_checked}};
    if (!g.passed()) item["witness"] = g.witness;
    gens.push_back(std::move(item));
  }
  return Json{{"passed", r.passed()}, {"generators", gens}};
}

// ---------------------------------------------------------------- files

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

namespace detail {

inline bool contains_object(const Json& j) {
  if (j.is_object()) return true;
  if (j.is_array())
    for (const auto& e : j)
      if (contains_object(e)) return true;
  return false;
}

// Two-space indentation, but short object-free arrays (scalars, matrix rows,
// exponents) stay on one line so matrices remain readable.
inline void write_pretty(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (j.is_array() && !j.empty() && !contains_object(j)) {
    std::string flat = j.dump();
    if (flat.size() <= 100) {
      out += flat;
      return;
    }
  }
  if (j.is_array() && !j.empty()) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      write_pretty(out, j[i], indent + 2);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += close + "]";
  } else if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad + Json(it.key()).dump() + ": ";
      write_pretty(out, it.value(), indent + 2);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += close + "}";
  } else {
    out += j.dump();
  }
}

}  // namespace detail

inline std::string dump(const Json& j) {
  std::string out;
  detail::write_pretty(out, j, 0);
  return out + "\n";
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << dump(j);
}

}  // namespace kforge::io
