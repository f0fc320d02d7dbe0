#include <CLI11.hpp>
#include <cctype>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "crjet/errors.hpp"
#include "crjet/parser.hpp"
#include "crjet/pde.hpp"
#include "crjet/reflection.hpp"
#include "crjet/segre.hpp"
#include "crjet/serialize.hpp"

namespace {

using namespace crjet;

struct Options {
  std::string surface_path;
  int order = 8;
  std::string format = "text";
  std::string point;
  int samples = 0;
  double tol = 1e-10;
  std::uint64_t seed = 12345;
};

bool structured(const Options& o) { return o.format == "structured"; }

void emit(const Options& o, const Json& doc, const std::string& text) {
  if (structured(o)) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

CRat parse_complex_literal(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ParseError("empty complex coordinate");
  CRat out;
  size_t pos = 0;
  while (pos < s.size()) {
    Rational sign(1);
    if (s[pos] == '+') {
      ++pos;
    } else if (s[pos] == '-') {
      sign = -1;
      ++pos;
    }
    if (pos >= s.size()) throw ParseError("malformed complex coordinate '" + raw + "'");
    if (s[pos] == 'i') {
      ++pos;
      out.im += sign;
      continue;
    }
    size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) {
      ++pos;
    }
    if (start == pos) throw ParseError("malformed complex coordinate '" + raw + "'");
    Rational value = sign * rational_from_string(s.substr(start, pos - start));
    if (pos < s.size() && s[pos] == '*') ++pos;
    if (pos < s.size() && s[pos] == 'i') {
      ++pos;
      out.im += value;
    } else {
      out.re += value;
    }
  }
  return out;
}

Point parse_point(const std::string& text, int n) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  if (static_cast<int>(parts.size()) != n + 1) {
    throw ParseError("--point needs " + std::to_string(n + 1) +
                     " comma-separated complex coordinates (z1..zn, w)");
  }
  Point q;
  for (int j = 0; j < n; ++j) q.z.push_back(parse_complex_literal(parts[static_cast<size_t>(j)]));
  q.w = parse_complex_literal(parts[static_cast<size_t>(n)]);
  return q;
}

Hypersurface load_surface(const Options& o) {
  if (o.surface_path.empty()) throw ParseError("--surface <path> is required");
  std::ifstream in(o.surface_path);
  if (!in) throw ParseError("cannot open surface file '" + o.surface_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  SurfaceFile file = parse_surface_file(buffer.str());
  return build_surface(file, o.order);
}

std::string matrix_text(const Matrix& m) {
  std::ostringstream out;
  for (const auto& row : m) {
    out << "  [";
    for (size_t k = 0; k < row.size(); ++k) out << (k ? ", " : " ") << row[k].str();
    out << " ]\n";
  }
  return out.str();
}

std::string series_matrix_text(const std::vector<std::vector<Series>>& m) {
  std::ostringstream out;
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = 0; j < m[i].size(); ++j) {
      out << "  [" << i + 1 << "," << j + 1 << "] " << m[i][j].str() << "\n";
    }
  }
  return out.str();
}

Json series_matrix_json(const std::vector<std::vector<Series>>& m) {
  Json rows = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const Series& s : row) r.push_back(series_to_json(s));
    rows.push_back(std::move(r));
  }
  return rows;
}

// The first nonzero coefficient of total degree <= limit, if any.
Json first_nonzero(const Series& s, int limit) {
  for (const auto& [exps, value] : s.sorted_terms()) {
    int deg = 0;
    for (int e : exps) deg += e;
    if (deg > limit) continue;
    Json out;
    out["exponents"] = exps;
    out["value"] = crat_to_json(value);
    return out;
  }
  return Json(nullptr);
}

int run_levi(const Options& o) {
  Hypersurface m = load_surface(o);
  Point q = o.point.empty() ? m.base() : parse_point(o.point, m.n());
  CRat value = levi_jacobian(m, q);
  Json doc{{"command", "levi"},
           {"n", m.n()},
           {"point", point_to_json(q)},
           {"levi_jacobian", crat_to_json(value)},
           {"nondegenerate", !value.is_zero()}};
  std::ostringstream text;
  text << "levi jacobian: " << value.str() << "\n"
       << (value.is_zero() ? "the surface is Levi-degenerate at the point\n"
                           : "the surface is Levi-nondegenerate at the point\n");
  emit(o, doc, text.str());
  return 0;
}

int run_normalize(const Options& o) {
  Hypersurface m = load_surface(o);
  NormalizeResult result = normalize_to_quadric(m);
  Json maps_fwd = Json::array(), maps_inv = Json::array();
  for (const Series& c : result.old_from_new) maps_fwd.push_back(series_to_json(c));
  for (const Series& c : result.new_from_old) maps_inv.push_back(series_to_json(c));
  Json doc{{"command", "normalize"},
           {"surface", series_to_json(result.surface.rho())},
           {"old_from_new", std::move(maps_fwd)},
           {"new_from_old", std::move(maps_inv)},
           {"unit", series_to_json(result.unit)},
           {"levi_form", matrix_to_json(result.levi_form)}};
  std::ostringstream text;
  text << "normalized rho = " << result.surface.rho().str() << "\n"
       << "old coordinates in terms of new:\n";
  for (size_t j = 0; j < result.old_from_new.size(); ++j) {
    text << "  " << result.old_from_new[j].ring()->name(static_cast<int>(j)) << " = "
         << result.old_from_new[j].str() << "\n";
  }
  text << "Levi form Q:\n" << matrix_text(result.levi_form);
  emit(o, doc, text.str());
  return 0;
}

int run_segre(const Options& o) {
  Hypersurface m = load_surface(o);
  if (o.point.empty()) throw ParseError("segre requires --point");
  Point q = parse_point(o.point, m.n());
  SegreGraph graph = segre_graph(m, q);
  SegreJet jet = segre_jet(m, q, 2);
  Json doc{{"command", "segre"},
           {"point", point_to_json(q)},
           {"graph_in_powers_of_z_minus_a", series_to_json(graph.taylor)},
           {"jet",
            {{"order", 2},
             {"value", crat_to_json(q.w)},
             {"gradient", [&] {
                Json g = Json::array();
                for (const CRat& c : jet.gradient()) g.push_back(crat_to_json(c));
                return g;
              }()},
             {"hessian", [&] {
                Json h = Json::array();
                for (const auto& row : jet.hessian()) {
                  Json r = Json::array();
                  for (const CRat& c : row) r.push_back(crat_to_json(c));
                  h.push_back(std::move(r));
                }
                return h;
              }()}}}};
  std::ostringstream text;
  text << "Segre graph: w = " << q.w.str() << " + g(z - a) with\n  g = " << graph.taylor.str()
       << "\n2-jet at the base point:\n  value: " << q.w.str() << "\n  gradient:";
  for (const CRat& c : jet.gradient()) text << " " << c.str() << ";";
  text << "\n  hessian:\n";
  for (const auto& row : jet.hessian()) {
    text << "   ";
    for (const CRat& c : row) text << " " << c.str() << ";";
    text << "\n";
  }
  emit(o, doc, text.str());
  return 0;
}

int run_phi(const Options& o) {
  Hypersurface m = load_surface(o);
  auto phi = phi_determinant(m);
  int samples = o.samples > 0 ? o.samples : 5;

  std::vector<Point> points;
  if (graph_solvable(m)) {
    points = sample_points(m, samples, o.seed, /*require_levi=*/false);
  } else {
    points.push_back(m.base());
  }

  bool all_equal = true;
  Json sample_docs = Json::array();
  for (const Point& q : points) {
    auto det = phi_determinant_at(m, q);
    auto oracle = phi_oracle(m, q);
    bool equal = det == oracle;
    all_equal = all_equal && equal;
    sample_docs.push_back(Json{{"point", point_to_json(q)},
                               {"determinant", matrix_to_json(det)},
                               {"oracle", matrix_to_json(oracle)},
                               {"equal", equal}});
  }
  std::string verdict = all_equal ? "exact" : "mismatch";
  Json doc{{"command", "phi"},
           {"phi", series_matrix_json(phi)},
           {"samples", std::move(sample_docs)},
           {"verdict", verdict}};
  std::ostringstream text;
  text << "Phi (bordered determinant / rho_w^3):\n"
       << series_matrix_text(phi) << "determinant vs implicit-differentiation oracle at "
       << points.size() << " point(s): " << verdict << "\n";
  emit(o, doc, text.str());
  if (!all_equal) {
    throw ContractError("determinant and oracle paths disagree; this is a library bug");
  }
  return 0;
}

int run_pde(const Options& o) {
  Hypersurface m = load_surface(o);
  ABSolution ab = solve_ab(m);
  PDESystem system = associated_pde(m);
  Json a_docs = Json::array();
  for (const Series& a : ab.A) a_docs.push_back(series_to_json(a));
  Json centers = Json::array();
  for (const CRat& c : system.xi_center) centers.push_back(crat_to_json(c));
  Json doc{{"command", "pde"},
           {"A", std::move(a_docs)},
           {"B", series_to_json(ab.B)},
           {"xi_center", std::move(centers)},
           {"phi", series_matrix_json(system.phi)}};
  std::ostringstream text;
  for (size_t j = 0; j < ab.A.size(); ++j) {
    text << "A" << j + 1 << " = " << ab.A[j].str() << "\n";
  }
  text << "B = " << ab.B.str() << "\nPhi_kl (second-order system on the jet chart):\n"
       << series_matrix_text(system.phi);
  emit(o, doc, text.str());
  return 0;
}

int run_integrability(const Options& o) {
  Hypersurface m = load_surface(o);
  PDESystem system = associated_pde(m);
  auto residuals = integrability_residual(system);
  bool pass = true;
  Json entries = Json::array();
  int trusted = system.ring->order();
  for (const auto& entry : residuals) {
    int t = entry.residual.trusted();
    trusted = std::min(trusted, t);
    Json bad = first_nonzero(entry.residual, t);
    bool zero = bad.is_null();
    pass = pass && zero;
    entries.push_back(Json{{"j", entry.j + 1},
                           {"k", entry.k + 1},
                           {"l", entry.l + 1},
                           {"trusted_degree", t},
                           {"zero_through_trusted", zero},
                           {"first_nonzero", std::move(bad)}});
  }
  Json doc{{"command", "integrability"},
           {"entries", std::move(entries)},
           {"pass", pass}};
  std::ostringstream text;
  if (residuals.empty()) {
    text << "n = 1: the integrability residual family is empty; nothing to check\n";
  } else {
    text << residuals.size() << " residuals L_j Phi_kl - L_k Phi_jl through degree " << trusted
         << ": " << (pass ? "all zero" : "NONZERO RESIDUAL FOUND") << "\n";
  }
  emit(o, doc, text.str());
  if (!pass) throw ContractError("integrability residual is nonzero; this is a library bug");
  return 0;
}

int run_contact(const Options& o) {
  Hypersurface m = load_surface(o);
  if (o.point.empty()) throw ParseError("contact requires --point");
  Point q = parse_point(o.point, m.n());
  ContactResidual residual = contact_residual(m, q);
  bool omega0_zero = true;
  for (const Series& s : residual.omega0) omega0_zero = omega0_zero && s.is_zero();
  bool omega_zero = true;
  int trusted = m.order();
  Json entries = Json::array();
  for (size_t k = 0; k < residual.omega.size(); ++k) {
    for (size_t l = 0; l < residual.omega[k].size(); ++l) {
      const Series& s = residual.omega[k][l];
      trusted = std::min(trusted, s.trusted());
      Json bad = first_nonzero(s, s.trusted());
      omega_zero = omega_zero && bad.is_null();
      entries.push_back(Json{{"k", k + 1},
                             {"l", l + 1},
                             {"trusted_degree", s.trusted()},
                             {"first_nonzero", std::move(bad)}});
    }
  }
  Json doc{{"command", "contact"},
           {"point", point_to_json(q)},
           {"omega0_zero", omega0_zero},
           {"omega_entries", std::move(entries)},
           {"pass", omega0_zero && omega_zero}};
  std::ostringstream text;
  text << "omega_0 pullback along the Segre lift: " << (omega0_zero ? "0" : "NONZERO") << "\n"
       << "omega_k pullbacks through degree " << trusted << ": "
       << (omega_zero ? "all zero" : "NONZERO") << "\n";
  emit(o, doc, text.str());
  if (!(omega0_zero && omega_zero)) {
    throw ContractError("contact residual is nonzero; this is a library bug");
  }
  return 0;
}

int run_reflect(const Options& o) {
  Hypersurface m = load_surface(o);
  bool normalized = false;
  CRat half_i(Rational(0), make_rational(1, 2));
  if (!(m.rho().coefficient_key(m.rho().ring()->unit_key(m.n())) == half_i)) {
    NormalizeResult result = normalize_to_quadric(m);
    m = result.surface;
    normalized = true;
    if (!m.rho().is_exact()) {
      throw ValidationError(
          "normalization did not stay polynomial at this truncation order; "
          "provide the surface in normalized coordinates");
    }
  }
  int samples = o.samples > 0 ? o.samples : 100;
  InvolutionReport report = involution_check(m, samples, o.tol, o.seed);

  ReflectionMap map(m);
  double antiholo = 0.0;
  {
    std::mt19937_64 rng(o.seed ^ 0x5eedULL);
    std::uniform_real_distribution<double> unit(-0.2, 0.2);
    for (int probe = 0; probe < 3; ++probe) {
      std::vector<Cx> z(static_cast<size_t>(m.n()));
      for (Cx& c : z) c = Cx(unit(rng), unit(rng));
      JetPointC p = map.lift_on_mj(z, unit(rng));
      p.w += Cx(unit(rng) / 8.0, unit(rng) / 8.0);
      antiholo = std::max(antiholo, antiholomorphy_defect(map, p, 1e-5));
    }
  }

  Json doc{{"command", "reflect"},
           {"normalized_first", normalized},
           {"samples", report.requested},
           {"converged", report.converged},
           {"failed", report.failed},
           {"tol", report.tol},
           {"max_involution_deviation", report.max_involution_deviation},
           {"max_fixed_deviation", report.max_fixed_deviation},
           {"max_antiholomorphy_defect", antiholo},
           {"pass", report.pass}};
  std::ostringstream text;
  text.precision(3);
  text << std::scientific;
  if (normalized) text << "surface normalized to quadric form first\n";
  text << "reflection involution over " << report.requested << " samples (tol " << o.tol
       << "): " << (report.pass ? "pass" : "FAIL") << "\n"
       << "  converged " << report.converged << ", failed " << report.failed << "\n"
       << "  max |tau(tau(p)) - p| = " << report.max_involution_deviation << "\n"
       << "  max |tau(p) - p| on the jet lift of M = " << report.max_fixed_deviation << "\n"
       << "  max anti-holomorphy defect (finite differences) = " << antiholo << "\n";
  emit(o, doc, text.str());
  if (!report.pass) {
    throw ConvergenceError("reflection involution check failed",
                           std::max(report.max_involution_deviation, report.max_fixed_deviation));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"crjet: exact jet-level invariants of real-analytic hypersurfaces in C^{n+1}"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--surface", o.surface_path, "surface definition file");
  app.add_option("--order", o.order, "series truncation order N (default 8)")
      ->check(CLI::Range(2, 1000));
  app.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"text", "structured"}));

  CLI::App* levi = app.add_subcommand("levi", "Levi jacobian at a point of M");
  levi->add_option("--point", o.point, "point of M (defaults to the marked point)");

  app.add_subcommand("normalize", "normalize to Q(z, zb) + (i/2)(w - wb) + O(3)");

  CLI::App* segre = app.add_subcommand("segre", "Segre variety graph and 2-jet at a point");
  segre->add_option("--point", o.point, "point of M")->required();

  CLI::App* phi = app.add_subcommand("phi", "two-jet function, determinant and oracle paths");
  phi->add_option("--samples", o.samples, "number of exact sample points (default 5)");

  app.add_subcommand("pde", "associated second-order system on the jet chart");
  app.add_subcommand("integrability", "Frobenius residuals of the associated system");

  CLI::App* contact = app.add_subcommand("contact", "contact-form pullbacks along a Segre lift");
  contact->add_option("--point", o.point, "point of M")->required();

  CLI::App* reflect = app.add_subcommand("reflect", "reflection involution sample report");
  reflect->add_option("--samples", o.samples, "sample count (default 100)");
  reflect->add_option("--tol", o.tol, "deviation tolerance (default 1e-10)");
  reflect->add_option("--seed", o.seed, "sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(crjet::ExitCode::parse_error);
  }

  try {
    if (app.got_subcommand("levi")) return run_levi(o);
    if (app.got_subcommand("normalize")) return run_normalize(o);
    if (app.got_subcommand("segre")) return run_segre(o);
    if (app.got_subcommand("phi")) return run_phi(o);
    if (app.got_subcommand("pde")) return run_pde(o);
    if (app.got_subcommand("integrability")) return run_integrability(o);
    if (app.got_subcommand("contact")) return run_contact(o);
    if (app.got_subcommand("reflect")) return run_reflect(o);
    throw crjet::ContractError("no subcommand dispatched");
  } catch (const crjet::Error& e) {
    Json record{{"error",
                 {{"kind", e.kind()},
                  {"message", e.what()},
                  {"exit_code", static_cast<int>(e.exit_code())}}}};
    if (structured(o)) {
      std::cout << record.dump(2) << "\n";
    } else {
      std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    }
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    if (structured(o)) {
      Json record{{"error",
                   {{"kind", "internal"}, {"message", e.what()}, {"exit_code", 5}}}};
      std::cout << record.dump(2) << "\n";
    } else {
      std::cerr << "internal error: " << e.what() << "\n";
    }
    return static_cast<int>(crjet::ExitCode::internal_error);
  }
}
