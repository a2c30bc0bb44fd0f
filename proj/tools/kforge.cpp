// kforge: command-line front end for the exact Kuranishi toolkit.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "kforge/kforge.hpp"

namespace {

using kforge::io::Json;
namespace io = kforge::io;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2, kResourceGuard = 3 };

std::string fnv1a_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unreadable";
  std::uint64_t hash = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

/// Collects everything a run reports. Only exact checks are recorded.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> artifacts;
  std::vector<std::string> notes;

  void input(const std::string& path) { inputs.emplace_back(path, fnv1a_digest(path)); }
  void check(std::string name, bool ok) { checks.emplace_back(std::move(name), ok); }
  bool all_passed() const {
    for (const auto& [name, ok] : checks)
      if (!ok) return false;
    return true;
  }

  Json to_json(double seconds) const {
    Json j;
    j["command"] = command;
    Json in = Json::array();
    for (const auto& [path, digest] : inputs) in.push_back(Json{{"path", path}, {"fnv1a64", digest}});
    j["inputs"] = in;
    Json c = Json::object();
    for (const auto& [name, ok] : checks) c[name] = ok;
    j["checks"] = c;
    j["artifacts"] = artifacts;
    j["notes"] = notes;
    j["wall_seconds"] = seconds;
    return j;
  }

  void print_summary(std::ostream& out) const {
    out << command << "\n";
    for (const auto& n : notes) out << "  note: " << n << "\n";
    for (const auto& [name, ok] : checks) out << "  [" << (ok ? "pass" : "FAIL") << "] " << name << "\n";
    for (const auto& a : artifacts) out << "  wrote " << a << "\n";
  }
};

struct Emitter {
  RunReport& report;
  std::string path;

  void operator()(const Json& j) const {
    if (path.empty()) {
      std::cout << io::dump(j);
      return;
    }
    io::write_json_file(path, j);
    report.artifacts.push_back(path);
  }
};

io::DglaDocument load_dgla(RunReport& report, const std::string& path) {
  report.input(path);
  return io::dgla_from_json(io::read_json_file(path));
}

kforge::MetricData load_metric(RunReport& report, const io::DglaDocument& doc, const std::string& metric_path) {
  if (metric_path.empty()) return doc.metric_or_identity();
  report.input(metric_path);
  return io::metric_from_json(io::read_json_file(metric_path), doc.dgla.space());
}

kforge::SolveOptions solve_options(bool force) {
  kforge::SolveOptions options;
  options.force = force;
  if (const char* env = std::getenv("KFORGE_MAX_PARAMS")) {
    try {
      options.max_parameters = std::stoul(env);
    } catch (const std::exception&) {
      throw kforge::InputError("KFORGE_MAX_PARAMS must be a non-negative integer");
    }
  }
  return options;
}

kforge::Scalar parse_scalar_flag(const std::string& text) {
  if (!text.empty() && text.front() == '[') {
    try {
      return io::scalar_from_json(Json::parse(text), "--twist");
    } catch (const Json::parse_error&) {
      throw kforge::InputError("--twist: malformed JSON scalar");
    }
  }
  auto comma = text.find(',');
  if (comma == std::string::npos) return kforge::Scalar::parse(text);
  return kforge::Scalar::parse(text.substr(0, comma), text.substr(comma + 1));
}

void add_dgla_checks(RunReport& report, const kforge::DglaReport& r) {
  for (const auto& c : r.checks)
    if (!c.skipped) report.check("dgla." + c.axiom, c.passed);
}

Json hodge_json(const kforge::DgLa& L, const kforge::HodgeData& h, const std::vector<std::size_t>& betti,
                const kforge::HodgeReport& hr) {
  const auto& space = L.space();
  Json j;
  Json degrees = Json::array();
  for (int q = space.min_degree; q <= space.max_degree; ++q) {
    Json basis = Json::array();
    for (std::size_t i = 0; i < h.harmonic_dim(q); ++i) basis.push_back(io::to_json(h.basis(q).column(i)));
    degrees.push_back(Json{{"degree", q},
                           {"dim", space.dim(q)},
                           {"betti", betti[static_cast<std::size_t>(q - space.min_degree)]},
                           {"harmonic_dim", h.harmonic_dim(q)},
                           {"harmonic_basis", basis}});
  }
  j["degrees"] = degrees;
  j["splitting_exact"] = hr.splitting_exact;
  Json checks = Json::object();
  for (const auto& c : hr.checks) checks[c.name] = c.passed;
  j["checks"] = checks;
  return j;
}

// ---------------------------------------------------------------- commands

void run_validate(RunReport& report, const std::string& dgla_path, bool skip_jacobi, const Emitter& emit) {
  auto doc = load_dgla(report, dgla_path);
  auto r = kforge::validate_dgla(doc.dgla, {skip_jacobi});
  add_dgla_checks(report, r);
  for (const auto& c : r.checks)
    if (!c.passed) report.notes.push_back(c.axiom + " fails at " + c.witness);
  emit(io::to_json(r, doc.dgla));
}

void run_hodge(RunReport& report, const std::string& dgla_path, const std::string& metric_path, const Emitter& emit) {
  auto doc = load_dgla(report, dgla_path);
  auto metric = load_metric(report, doc, metric_path);
  auto h = kforge::hodge_data(doc.dgla, metric);
  auto betti = kforge::betti_numbers(doc.dgla);
  auto hr = kforge::verify_hodge(doc.dgla, h);
  for (const auto& c : hr.checks) report.check("hodge." + c.name, c.passed);
  bool betti_match = true;
  for (int q = doc.dgla.space().min_degree; q <= doc.dgla.space().max_degree; ++q)
    betti_match = betti_match && betti[static_cast<std::size_t>(q - doc.dgla.space().min_degree)] == h.harmonic_dim(q);
  report.check("hodge.betti_matches_harmonic", betti_match);
  emit(hodge_json(doc.dgla, h, betti, hr));
}

void run_kuranishi(RunReport& report, const std::string& dgla_path, const std::string& metric_path, int order,
                   bool force, bool skip_jacobi, const Emitter& emit) {
  auto doc = load_dgla(report, dgla_path);
  add_dgla_checks(report, kforge::validate_dgla(doc.dgla, {skip_jacobi}));
  auto metric = load_metric(report, doc, metric_path);
  auto h = kforge::hodge_data(doc.dgla, metric);
  auto f = kforge::solve_kuranishi(doc.dgla, h, order, solve_options(force));
  auto diag = kforge::verify_family(doc.dgla, h, f);
  report.check("family.harmonic_part", diag.harmonic_part);
  report.check("family.coclosed", diag.coclosed);
  report.check("family.kuranishi_fixed", diag.kuranishi_fixed);
  report.check("family.elliptic", diag.elliptic);
  report.check("family.fixed_point", diag.fixed_point);
  for (const auto& n : f.notices) report.notes.push_back(n);
  report.notes.push_back(std::to_string(f.parameters.size()) + " parameters, " + std::to_string(f.ideal_generators.size()) +
                         " ideal generators");
  for (std::size_t n = 0; n < f.ideal_generators.size(); ++n) {
    std::string text;
    for (const auto& [e, c] : f.ideal_generators[n].terms())
      text += (text.empty() ? "" : " + ") + std::string("(") + c.to_string() + ")*" +
              kforge::monomial_string(f.parameters, e);
    report.notes.push_back("generator " + std::to_string(f.generator_indices[n]) + ": " + text);
  }
  emit(io::to_json(f, h, diag));
}

void run_equivariance(RunReport& report, const std::string& dgla_path, const std::string& action_path,
                      const std::string& metric_path, int order, bool average, std::size_t max_group, bool force,
                      bool skip_jacobi, const Emitter& emit) {
  auto doc = load_dgla(report, dgla_path);
  const auto& L = doc.dgla;
  add_dgla_checks(report, kforge::validate_dgla(L, {skip_jacobi}));
  auto metric = load_metric(report, doc, metric_path);
  report.input(action_path);
  auto action = io::action_from_json(io::read_json_file(action_path), L.space());

  Json out;
  if (average) {
    auto* group = std::get_if<kforge::GroupAction>(&action);
    if (!group) throw kforge::InputError("--average-metric needs a finite action");
    metric = kforge::average_metric(L.space(), metric, *group, max_group);
    out["metric"] = io::per_degree_to_json(metric.gram);
  }
  auto h = kforge::hodge_data(L, metric);
  auto f = kforge::solve_kuranishi(L, h, order, solve_options(force));

  kforge::ActionReport ar;
  kforge::EquivarianceReport er;
  if (auto* group = std::get_if<kforge::GroupAction>(&action)) {
    ar = kforge::validate_action(L, metric, *group);
    er = kforge::check_family_equivariance(L, h, f, *group);
  } else {
    const auto& inf = std::get<kforge::InfinitesimalAction>(action);
    ar = kforge::validate_action(L, metric, inf);
    er = kforge::check_infinitesimal_equivariance(L, h, f, inf);
  }
  report.check("action.valid", ar.passed());
  for (const auto& g : er.generators) {
    const std::string prefix = "equivariance[" + std::to_string(g.index) + "].";
    report.check(prefix + "alpha", g.alpha_equivariant);
    report.check(prefix + "obstruction", g.obstruction_equivariant);
    report.check(prefix + "ideal", g.ideal_invariant);
    if (!g.witness.empty()) report.notes.push_back(prefix + " first failing monomial " + g.witness);
  }
  out["action"] = io::to_json(ar);
  out["equivariance"] = io::to_json(er);
  emit(out);
}

void run_average_metric(RunReport& report, const std::string& dgla_path, const std::string& action_path,
                        const std::string& metric_path, std::size_t max_group, const Emitter& emit) {
  auto doc = load_dgla(report, dgla_path);
  const auto& L = doc.dgla;
  auto metric = load_metric(report, doc, metric_path);
  report.input(action_path);
  auto action = io::action_from_json(io::read_json_file(action_path), L.space());
  auto* group = std::get_if<kforge::GroupAction>(&action);
  if (!group) throw kforge::InputError("average-metric needs a finite action");
  auto averaged = kforge::average_metric(L.space(), metric, *group, max_group);
  kforge::validate_metric(L.space(), averaged);
  kforge::GroupAction closure{kforge::group_closure(L.space(), *group, max_group), {}};
  report.notes.push_back("group order " + std::to_string(closure.generators.size()));
  report.check("metric.invariant_under_group",
               kforge::validate_action(L, averaged, closure).holds("metric_invariant"));
  emit(io::metric_to_json(averaged));
}

void run_gauge(RunReport& report, const std::string& dgla_path, const std::string& xi_path,
               const std::string& series_path, const Emitter& emit) {
  auto doc = load_dgla(report, dgla_path);
  const auto& L = doc.dgla;
  report.input(xi_path);
  report.input(series_path);
  auto xi = io::graded_series_from_json(io::read_json_file(xi_path), L.space());
  auto s = io::graded_series_from_json(io::read_json_file(series_path), L.space());
  auto result = kforge::gauge_transform(L, xi, s);
  report.check("gauge.inverse_recovers_input", kforge::gauge_transform(L, xi * kforge::Scalar(-1), result) == s);
  if (kforge::mc_residual(L, s).is_zero())
    report.check("gauge.preserves_maurer_cartan", kforge::mc_residual(L, result).is_zero());
  emit(io::to_json(result));
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  for (int i = 0; i < argc; ++i) report.command += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"kforge: exact Maurer-Cartan, Hodge and Kuranishi computations for finite dgLas"};
  app.require_subcommand(1);
  std::string report_path;
  app.add_option("--report", report_path, "Write the run report (JSON) to this file");

  std::string dgla_path, metric_path, action_path, emit_path, xi_path, series_path;
  int order = 4;
  bool skip_jacobi = false, force = false, average = false;
  std::size_t max_group = 1024;

  auto* validate = app.add_subcommand("validate", "Check the dgLa axioms");
  validate->add_option("dgla", dgla_path, "dgLa JSON")->required();
  validate->add_flag("--skip-jacobi", skip_jacobi, "Skip the cubic Jacobi check");
  validate->add_option("--emit", emit_path, "Write the report JSON here");

  auto* hodge = app.add_subcommand("hodge", "Hodge operators, Betti numbers and the splitting certificate");
  hodge->add_option("dgla", dgla_path)->required();
  hodge->add_option("--metric", metric_path, "Metric JSON (defaults to the document's metric or identity)");
  hodge->add_option("--emit", emit_path);

  auto* kuranishi = app.add_subcommand("kuranishi", "Solve the Kuranishi family to a given order");
  kuranishi->add_option("dgla", dgla_path)->required();
  kuranishi->add_option("--order", order, "Truncation order")->capture_default_str();
  kuranishi->add_option("--metric", metric_path);
  kuranishi->add_option("--emit", emit_path);
  kuranishi->add_flag("--force", force, "Ignore the parameter-count limit");
  kuranishi->add_flag("--skip-jacobi", skip_jacobi);

  auto* equivariance = app.add_subcommand("equivariance", "Certify that an action descends to the Kuranishi family");
  equivariance->add_option("dgla", dgla_path)->required();
  equivariance->add_option("--action", action_path)->required();
  equivariance->add_option("--order", order)->capture_default_str();
  equivariance->add_option("--metric", metric_path);
  equivariance->add_flag("--average-metric", average, "Average the metric over the finite group first");
  equivariance->add_option("--max-group", max_group)->capture_default_str();
  equivariance->add_option("--emit", emit_path);
  equivariance->add_flag("--force", force);
  equivariance->add_flag("--skip-jacobi", skip_jacobi);

  auto* average_cmd = app.add_subcommand("average-metric", "Average a metric over a finite group");
  average_cmd->add_option("dgla", dgla_path)->required();
  average_cmd->add_option("--action", action_path)->required();
  average_cmd->add_option("--metric", metric_path);
  average_cmd->add_option("--max-group", max_group)->capture_default_str();
  average_cmd->add_option("--emit", emit_path);

  auto* gauge = app.add_subcommand("gauge", "Apply the gauge action exp(xi) to a degree-1 series");
  gauge->add_option("dgla", dgla_path)->required();
  gauge->add_option("--xi", xi_path, "Degree-0 series JSON")->required();
  gauge->add_option("--series", series_path, "Degree-1 series JSON")->required();
  gauge->add_option("--emit", emit_path);

  auto* build = app.add_subcommand("build", "Construct example dgLas and actions");
  build->require_subcommand(1);
  int dim = 2, rank_r = 2, cutoff = 1;
  std::string twist = "0", matrix_path, emit_action_path;
  bool same_wedge = false;
  auto* torus = build->add_subcommand("torus-constants", "gl(r)-valued constant forms on an n-torus");
  torus->add_option("--dim", dim)->capture_default_str();
  torus->add_option("--rank", rank_r)->capture_default_str();
  torus->add_flag("--same-wedge", same_wedge, "Use the non-antisymmetric same-wedge bracket (negative fixture)");
  torus->add_option("--emit", emit_path);
  auto* twisted = build->add_subcommand("twisted", "Abelian Dolbeault complex of a twisted line bundle on a 1-torus");
  twisted->add_option("--cutoff", cutoff)->capture_default_str();
  twisted->add_option("--twist", twist, "Scalar: \"p/q\", \"re,im\" or [\"re\",\"im\"]")->capture_default_str();
  twisted->add_option("--emit", emit_path);
  auto* toy = build->add_subcommand("toy3", "Minimal dgLa with a third-order obstruction");
  toy->add_option("--emit", emit_path);
  toy->add_option("--emit-action", emit_action_path);
  auto* conj = build->add_subcommand("conjugation", "Conjugation action A -> h^-1 A h on torus constants");
  conj->add_option("--dim", dim)->capture_default_str();
  conj->add_option("--rank", rank_r)->capture_default_str();
  conj->add_option("--matrix", matrix_path, "JSON square matrix h")->required();
  conj->add_option("--emit", emit_path);
  auto* inner = build->add_subcommand("inner-derivation", "Derivation A -> [X, A] on torus constants");
  inner->add_option("--dim", dim)->capture_default_str();
  inner->add_option("--rank", rank_r)->capture_default_str();
  inner->add_option("--matrix", matrix_path, "JSON square matrix X")->required();
  inner->add_option("--emit", emit_path);
  auto* swap = build->add_subcommand("form-swap", "Coordinate swap on the 2-torus acting on forms");
  swap->add_option("--rank", rank_r)->capture_default_str();
  swap->add_option("--emit", emit_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kInputError;
  }

  int code = kOk;
  try {
    const Emitter emit{report, emit_path};
    if (*validate) {
      run_validate(report, dgla_path, skip_jacobi, emit);
    } else if (*hodge) {
      run_hodge(report, dgla_path, metric_path, emit);
    } else if (*kuranishi) {
      run_kuranishi(report, dgla_path, metric_path, order, force, skip_jacobi, emit);
    } else if (*equivariance) {
      run_equivariance(report, dgla_path, action_path, metric_path, order, average, max_group, force, skip_jacobi, emit);
    } else if (*average_cmd) {
      run_average_metric(report, dgla_path, action_path, metric_path, max_group, emit);
    } else if (*gauge) {
      run_gauge(report, dgla_path, xi_path, series_path, emit);
    } else if (*torus) {
      auto built = kforge::build_torus_constant_dgla(
          dim, rank_r, same_wedge ? kforge::WedgeBracket::same_wedge : kforge::WedgeBracket::graded);
      emit(io::to_json(built.dgla));
    } else if (*twisted) {
      auto built = kforge::build_twisted_dolbeault(cutoff, parse_scalar_flag(twist));
      report.notes.push_back("Fourier symbol rescaled to m1 + i*m2 + c; a uniform rescaling of d only rescales parameters");
      emit(io::to_json(built.dgla));
    } else if (*toy) {
      auto built = kforge::build_toy3();
      emit(io::to_json(built.dgla));
      if (!emit_action_path.empty()) Emitter{report, emit_action_path}(io::to_json(built.action));
    } else if (*conj) {
      report.input(matrix_path);
      auto h = io::square_matrix_from_json(io::read_json_file(matrix_path), "");
      auto action = kforge::build_conjugation_action(dim, rank_r, h);
      report.check("conjugation.metric_compatible", kforge::is_scaled_unitary(h));
      emit(io::to_json(action));
    } else if (*inner) {
      report.input(matrix_path);
      auto x = io::square_matrix_from_json(io::read_json_file(matrix_path), "");
      emit(io::to_json(kforge::build_inner_derivation(dim, rank_r, x)));
    } else if (*swap) {
      emit(io::to_json(kforge::build_form_swap_action(rank_r)));
    }
    code = report.all_passed() ? kOk : kCheckFailed;
  } catch (const kforge::ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    code = kResourceGuard;
  } catch (const kforge::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    code = kInputError;
  } catch (const kforge::MetricError& e) {
    std::cerr << "metric error: " << e.what() << "\n";
    code = kInputError;
  } catch (const kforge::ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    code = kCheckFailed;
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // With no --emit the artifact itself goes to stdout, so the summary moves aside.
  report.print_summary(emit_path.empty() ? std::cerr : std::cout);
  if (!report_path.empty()) {
    try {
      io::write_json_file(report_path, report.to_json(seconds));
    } catch (const kforge::InputError& e) {
      std::cerr << e.what() << "\n";
      return kInputError;
    }
  }
  return code;
}
