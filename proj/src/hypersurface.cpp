#include "crjet/hypersurface.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "crjet/errors.hpp"
#include "crjet/substitution.hpp"

namespace crjet {

namespace {

std::string zname(int j) { return "z" + std::to_string(j + 1); }
std::string zbname(int j) { return "zb" + std::to_string(j + 1); }

std::vector<int> conjugate_permutation(int n) {
  std::vector<int> perm(static_cast<size_t>(2 * n + 2));
  for (int j = 0; j < n; ++j) {
    perm[static_cast<size_t>(j)] = n + 1 + j;
    perm[static_cast<size_t>(n + 1 + j)] = j;
  }
  perm[static_cast<size_t>(n)] = 2 * n + 1;
  perm[static_cast<size_t>(2 * n + 1)] = n;
  return perm;
}

int surface_n(const Series& s) {
  // Surface rings have 2n + 2 variables.
  return (s.ring()->nvars() - 2) / 2;
}

std::string monomial_str(const Ring& ring, const MultiIndex& exps) {
  std::ostringstream out;
  bool first = true;
  for (int i = 0; i < ring.nvars(); ++i) {
    int e = exps[static_cast<size_t>(i)];
    if (e == 0) continue;
    if (!first) out << "*";
    first = false;
    out << ring.name(i);
    if (e > 1) out << "^" << e;
  }
  return first ? std::string("1") : out.str();
}

void require_polynomial(const Series& s, const char* op) {
  if (!s.is_exact()) {
    throw ContractError(std::string(op) + " requires a polynomial defining series");
  }
}

}  // namespace

RingPtr surface_ring(int n, int order) {
  std::vector<std::string> names;
  for (int j = 0; j < n; ++j) names.push_back(zname(j));
  names.push_back("w");
  for (int j = 0; j < n; ++j) names.push_back(zbname(j));
  names.push_back("wb");
  return Ring::make(std::move(names), order);
}

RingPtr theta_ring(int n, int order) {
  std::vector<std::string> names;
  for (int j = 0; j < n; ++j) names.push_back(zname(j));
  for (int j = 0; j < n; ++j) names.push_back(zbname(j));
  names.push_back("wb");
  return Ring::make(std::move(names), order);
}

RingPtr graph_ring(int n, int order) {
  std::vector<std::string> names;
  for (int j = 0; j < n; ++j) names.push_back(zname(j));
  for (int j = 0; j < n; ++j) names.push_back(zbname(j));
  names.push_back("u");
  return Ring::make(std::move(names), order);
}

RingPtr map_ring(int n, int order) {
  std::vector<std::string> names;
  for (int j = 0; j < n; ++j) names.push_back(zname(j));
  names.push_back("w");
  return Ring::make(std::move(names), order);
}

RingPtr z_ring(int n, int order) {
  std::vector<std::string> names;
  for (int j = 0; j < n; ++j) names.push_back(zname(j));
  return Ring::make(std::move(names), order);
}

Point origin_point(int n) {
  Point p;
  p.z.assign(static_cast<size_t>(n), CRat());
  return p;
}

std::vector<CRat> point_args(const Point& q) {
  std::vector<CRat> args;
  args.reserve(2 * q.z.size() + 2);
  for (const CRat& v : q.z) args.push_back(v);
  args.push_back(q.w);
  for (const CRat& v : q.z) args.push_back(v.conj());
  args.push_back(q.w.conj());
  return args;
}

Series conjugate_swap(const Series& s) {
  return s.permuted_conjugate(conjugate_permutation(surface_n(s)));
}

void validate_reality(const Series& rho) {
  Series swapped = conjugate_swap(rho);
  if (swapped == rho) return;
  Series diff = swapped - rho;
  auto offending = diff.sorted_terms().front();
  const Ring& ring = *rho.ring();
  const int n = surface_n(rho);
  MultiIndex partner(offending.first);
  auto perm = conjugate_permutation(n);
  for (size_t i = 0; i < partner.size(); ++i) {
    partner[static_cast<size_t>(perm[i])] = offending.first[i];
  }
  throw RealityError(
      "defining series is not real: coefficient of " + monomial_str(ring, offending.first) +
      " (" + rho.coefficient(offending.first).str() + ") is not the conjugate of the coefficient of " +
      monomial_str(ring, partner) + " (" + rho.coefficient(partner).str() + ")");
}

Hypersurface::Hypersurface(int n, Series rho) : Hypersurface(n, std::move(rho), origin_point(n)) {}

Hypersurface::Hypersurface(int n, Series rho, Point base)
    : n_(n), rho_(std::move(rho)), base_(std::move(base)) {
  if (n < 1) throw ValidationError("hypersurface dimension n must be positive");
  RingPtr expected = surface_ring(n, rho_.order());
  if (!rho_.ring()->same(*expected)) {
    throw ContractError("defining series does not live in the surface chart ring");
  }
  if (!rho_.constant_term().is_zero()) {
    throw ValidationError("defining series does not vanish at the marked point");
  }
  validate_reality(rho_);
  bool has_linear = false;
  for (int v = 0; v < rho_.ring()->nvars(); ++v) {
    if (!rho_.coefficient_key(rho_.ring()->unit_key(v)).is_zero()) {
      has_linear = true;
      break;
    }
  }
  if (!has_linear) {
    throw ValidationError("d rho vanishes at the marked point; not a hypersurface germ");
  }
  if (static_cast<int>(base_.z.size()) != n) {
    throw ContractError("base point dimension does not match n");
  }
}

Hypersurface Hypersurface::from_graph_form(int n, const Series& phi) {
  const int order = phi.order();
  RingPtr gring = graph_ring(n, order);
  if (!phi.ring()->same(*gring)) {
    throw ContractError("graph series must live in graph_ring(n, order)");
  }
  RingPtr sring = surface_ring(n, order);
  Series w = Series::variable(sring, n);
  Series wb = Series::variable(sring, 2 * n + 1);
  CRat half(make_rational(1, 2));
  CRat half_i(Rational(0), make_rational(1, 2));
  std::map<std::string, Series> assignment;
  assignment.emplace("u", half * (w + wb));
  Series rho = substitute(phi, sring, assignment) + half_i * (w - wb);
  return Hypersurface(n, std::move(rho));
}

CRat rho_value_at(const Hypersurface& m, const Point& q) {
  require_polynomial(m.rho(), "point evaluation");
  return m.rho().evaluate(point_args(q));
}

CRat rho_w_at(const Hypersurface& m, const Point& q) {
  require_polynomial(m.rho(), "point evaluation");
  return m.rho().derivative(m.n()).evaluate(point_args(q));
}

bool on_hypersurface(const Hypersurface& m, const Point& q) {
  return rho_value_at(m, q).is_zero();
}

Hypersurface recenter(const Hypersurface& m, const Point& q) {
  require_polynomial(m.rho(), "recentering");
  if (!on_hypersurface(m, q)) {
    throw DomainError("cannot recenter: the point does not lie on the hypersurface");
  }
  const RingPtr& ring = m.rho().ring();
  const int n = m.n();
  std::map<int, Series> shift;
  for (int j = 0; j < n; ++j) {
    shift.emplace(j, Series::variable(ring, j) + Series::constant(ring, q.z[static_cast<size_t>(j)]));
    shift.emplace(n + 1 + j, Series::variable(ring, n + 1 + j) +
                                 Series::constant(ring, q.z[static_cast<size_t>(j)].conj()));
  }
  shift.emplace(n, Series::variable(ring, n) + Series::constant(ring, q.w));
  shift.emplace(2 * n + 1, Series::variable(ring, 2 * n + 1) + Series::constant(ring, q.w.conj()));
  SubstitutionPlan plan(ring, ring, std::move(shift), /*allow_constant_terms=*/true);
  return Hypersurface(n, plan.apply(m.rho()), q);
}

ComplexDefiner complex_defining_equation(const Hypersurface& m) {
  const int n = m.n();
  const RingPtr& ring = m.rho().ring();
  if (m.rho().coefficient_key(ring->unit_key(n)).is_zero()) {
    throw BadCoordinatesError("rho_w(0) = 0; rotate coordinates before solving for w");
  }
  ImplicitSystem system{{m.rho()}, {n}};
  RingPtr target = theta_ring(n, m.order());
  Series theta = implicit_solve(system, target)[0];
  return ComplexDefiner{target, std::move(theta)};
}

CRat levi_jacobian(const Hypersurface& m, const Point& q) {
  require_polynomial(m.rho(), "the Levi jacobian");
  const int n = m.n();
  std::vector<CRat> args = point_args(q);
  const Series& rho = m.rho();
  if (!rho.evaluate(args).is_zero()) {
    throw DomainError("the Levi jacobian is evaluated at points of the hypersurface only");
  }

  const int iw = n, iwb = 2 * n + 1;
  auto dz = [&](int j) { return j; };
  auto dzb = [&](int j) { return n + 1 + j; };

  Series rho_w = rho.derivative(iw);
  CRat vw = rho_w.evaluate(args);
  if (vw.is_zero()) {
    throw BadCoordinatesError("rho_w vanishes at the point; rotate coordinates first");
  }

  // Derivatives of theta at (q, conj q) expressed through rho: from
  // rho(z, theta, zb, wb) = 0, theta_s = -rho_s / rho_w and, for the second
  // order, theta_{z_j s} = -(rho_{z_j s} + rho_{z_j w} theta_s
  //                          + rho_{w s} theta_{z_j}
  //                          + rho_{ww} theta_s theta_{z_j}) / rho_w.
  Series rho_ww = rho_w.derivative(iw);
  CRat vww = rho_ww.evaluate(args);

  std::vector<CRat> theta_first(static_cast<size_t>(n + 1));  // zb_1..zb_n, wb
  for (int k = 0; k <= n; ++k) {
    int var = (k < n) ? dzb(k) : iwb;
    theta_first[static_cast<size_t>(k)] = -(rho.derivative(var).evaluate(args)) / vw;
  }

  Matrix jac(static_cast<size_t>(n + 1), std::vector<CRat>(static_cast<size_t>(n + 1)));
  jac[0] = theta_first;
  for (int j = 0; j < n; ++j) {
    Series rho_zj = rho.derivative(dz(j));
    CRat theta_zj = -(rho_zj.evaluate(args)) / vw;
    Series rho_zjw = rho_zj.derivative(iw);
    CRat vzjw = rho_zjw.evaluate(args);
    for (int k = 0; k <= n; ++k) {
      int var = (k < n) ? dzb(k) : iwb;
      CRat vmixed = rho_zj.derivative(var).evaluate(args);
      CRat vws = rho_w.derivative(var).evaluate(args);
      const CRat& ts = theta_first[static_cast<size_t>(k)];
      jac[static_cast<size_t>(j + 1)][static_cast<size_t>(k)] =
          -(vmixed + vzjw * ts + vws * theta_zj + vww * ts * theta_zj) / vw;
    }
  }
  return determinant(std::move(jac));
}

Series apply_holomorphic_map(const Series& s, const std::vector<Series>& components) {
  const int n = surface_n(s);
  if (static_cast<int>(components.size()) != n + 1) {
    throw ContractError("holomorphic map needs n + 1 components");
  }
  const RingPtr& sring = s.ring();
  std::map<int, Series> assignment;
  for (int j = 0; j <= n; ++j) {
    const Series& comp = components[static_cast<size_t>(j)];
    Series holo = comp.transport(sring);
    // Conjugate component: conjugated coefficients with (z, w) -> (zb, wb).
    Series anti(sring);
    {
      const Ring& mring = *comp.ring();
      MultiIndex exps(static_cast<size_t>(sring->nvars()), 0);
      for (const auto& [key, value] : comp.terms()) {
        std::fill(exps.begin(), exps.end(), 0);
        for (int v = 0; v <= n; ++v) {
          int e = mring.exponent(key, v);
          if (e == 0) continue;
          exps[static_cast<size_t>(v < n ? n + 1 + v : 2 * n + 1)] = e;
        }
        anti.add_term(sring->pack(exps), value.conj());
      }
      anti.set_trusted(comp.trusted());
    }
    int target = (j < n) ? j : n;
    int conj_target = (j < n) ? n + 1 + j : 2 * n + 1;
    assignment.emplace(target, std::move(holo));
    assignment.emplace(conj_target, std::move(anti));
  }
  SubstitutionPlan plan(sring, sring, std::move(assignment));
  return plan.apply(s);
}

std::vector<Series> compose_maps(const std::vector<Series>& f, const std::vector<Series>& g) {
  if (f.empty() || f.size() != g.size()) throw ContractError("map composition needs equal arity");
  const RingPtr& ring = f.front().ring();
  const int n = static_cast<int>(f.size()) - 1;
  std::map<int, Series> assignment;
  for (int j = 0; j <= n; ++j) assignment.emplace(j, g[static_cast<size_t>(j)]);
  SubstitutionPlan plan(ring, ring, std::move(assignment));
  std::vector<Series> out;
  out.reserve(f.size());
  for (const Series& comp : f) out.push_back(plan.apply(comp));
  return out;
}

std::vector<Series> invert_map(const std::vector<Series>& f) {
  if (f.empty()) throw ContractError("cannot invert an empty map");
  const RingPtr& mring = f.front().ring();
  const int n = static_cast<int>(f.size()) - 1;
  const int order = mring->order();

  // Solve f(y) = x for y: equations f_i(t) - x_i over (x-block, t-block).
  std::vector<std::string> names = mring->names();
  for (int j = 0; j <= n; ++j) names.push_back("t" + std::to_string(j + 1));
  RingPtr combo = Ring::make(std::move(names), order);

  std::map<int, Series> to_unknowns;
  for (int j = 0; j <= n; ++j) {
    to_unknowns.emplace(j, Series::variable(combo, n + 1 + j));
  }
  SubstitutionPlan lift(mring, combo, std::move(to_unknowns));

  ImplicitSystem system;
  for (int j = 0; j <= n; ++j) {
    system.equations.push_back(lift.apply(f[static_cast<size_t>(j)]) -
                               Series::variable(combo, j));
    system.unknowns.push_back(n + 1 + j);
  }
  return implicit_solve(system, mring);
}

NormalizeResult normalize_to_quadric(const Hypersurface& m) {
  const int n = m.n();
  const int order = m.order();
  const RingPtr& sring = m.rho().ring();
  RingPtr mring = map_ring(n, order);
  const int iw = n, iwb = 2 * n + 1;

  auto key_of = [&](std::initializer_list<std::pair<int, int>> exps) {
    MultiIndex e(static_cast<size_t>(sring->nvars()), 0);
    for (auto [var, p] : exps) e[static_cast<size_t>(var)] = p;
    return sring->pack(e);
  };

  std::vector<Series> identity;
  for (int j = 0; j <= n; ++j) identity.push_back(Series::variable(mring, j));

  // Linear step: send the holomorphic linear part sum_j a_j z_j + lambda w
  // to (i/2) w'. Solving for the old w gives
  // w = ((i/2) w' - sum a_j z_j) / lambda.
  CRat lambda = m.rho().coefficient_key(sring->unit_key(iw));
  if (lambda.is_zero()) {
    throw BadCoordinatesError("rho_w(0) = 0; rotate coordinates before normalizing");
  }
  CRat half_i(Rational(0), make_rational(1, 2));
  std::vector<Series> map_a = identity;
  {
    Series wexpr = half_i * Series::variable(mring, n);
    for (int j = 0; j < n; ++j) {
      CRat aj = m.rho().coefficient_key(sring->unit_key(j));
      if (!aj.is_zero()) wexpr -= aj * Series::variable(mring, j);
    }
    map_a[static_cast<size_t>(n)] = wexpr.scaled(CRat(1) / lambda);
  }
  Series rho1 = apply_holomorphic_map(m.rho(), map_a);

  // Hermitian block and strict pseudoconvexity via leading principal minors.
  Matrix h(static_cast<size_t>(n), std::vector<CRat>(static_cast<size_t>(n)));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      h[static_cast<size_t>(j)][static_cast<size_t>(k)] =
          rho1.coefficient_key(key_of({{j, 1}, {n + 1 + k, 1}}));
    }
  }
  for (int k = 1; k <= n; ++k) {
    Matrix minor(static_cast<size_t>(k), std::vector<CRat>(static_cast<size_t>(k)));
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) minor[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          h[static_cast<size_t>(a)][static_cast<size_t>(b)];
    }
    CRat det = determinant(std::move(minor));
    if (!det.is_real() || sgn(det.re) <= 0) {
      throw NotStrictlyPseudoconvexError(
          "the Levi form at the marked point is not positive definite");
    }
  }

  // Shear z_j -> z_j + alpha_j w to remove the z_j*wb block: solve
  // h . conj(alpha) = -c with c_j the z_j*wb coefficient.
  std::vector<Series> map_c = identity;
  {
    std::vector<CRat> c(static_cast<size_t>(n));
    bool any = false;
    for (int j = 0; j < n; ++j) {
      c[static_cast<size_t>(j)] = rho1.coefficient_key(key_of({{j, 1}, {iwb, 1}}));
      any = any || !c[static_cast<size_t>(j)].is_zero();
    }
    if (any) {
      Matrix hinv;
      if (!try_invert(h, hinv)) {
        throw NotStrictlyPseudoconvexError("degenerate Levi form while normalizing");
      }
      std::vector<CRat> rhs(static_cast<size_t>(n));
      for (int j = 0; j < n; ++j) rhs[static_cast<size_t>(j)] = -c[static_cast<size_t>(j)];
      std::vector<CRat> alpha_conj = mat_vec(hinv, rhs);
      for (int j = 0; j < n; ++j) {
        map_c[static_cast<size_t>(j)] =
            Series::variable(mring, j) +
            alpha_conj[static_cast<size_t>(j)].conj() * Series::variable(mring, n);
      }
    }
  }
  Series rho2 = apply_holomorphic_map(rho1, map_c);

  // Unit factor E = 1 - i r (w - wb) clears the real w*wb coefficient r.
  Series unit = Series::constant(sring, CRat(1));
  {
    CRat r = rho2.coefficient_key(key_of({{iw, 1}, {iwb, 1}}));
    if (!r.is_zero()) {
      CRat gamma = -r;
      Series wv = Series::variable(sring, iw), wbv = Series::variable(sring, iwb);
      unit = Series::constant(sring, CRat(1)) + (gamma * CRat::i()) * (wv - wbv);
    }
  }
  Series rho3 = unit * rho2;

  // Absorb the remaining pure holomorphic quadratic G via
  // w -> w + 2i G(z, w).
  std::vector<Series> map_b = identity;
  {
    Series g(mring);
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        CRat v = rho3.coefficient_key(j == k ? key_of({{j, 2}}) : key_of({{j, 1}, {k, 1}}));
        if (!v.is_zero()) {
          g += v * (Series::variable(mring, j) * Series::variable(mring, k));
        }
      }
      CRat vjw = rho3.coefficient_key(key_of({{j, 1}, {iw, 1}}));
      if (!vjw.is_zero()) {
        g += vjw * (Series::variable(mring, j) * Series::variable(mring, n));
      }
    }
    CRat vww = rho3.coefficient_key(key_of({{iw, 2}}));
    if (!vww.is_zero()) g += vww * Series::variable(mring, n).pow(2);
    if (!g.is_zero()) {
      map_b[static_cast<size_t>(n)] =
          Series::variable(mring, n) + (CRat(2) * CRat::i()) * g;
    }
  }
  Series rho4 = apply_holomorphic_map(rho3, map_b);
  Series unit_total = apply_holomorphic_map(unit, map_b);

  // No degree-2 term may survive outside the Hermitian block.
  for (const auto& [exps, value] : rho4.truncated(2).sorted_terms()) {
    int deg = 0;
    for (int e : exps) deg += e;
    if (deg < 2) continue;
    bool hermitian = false;
    for (int j = 0; j < n && !hermitian; ++j) {
      for (int k = 0; k < n && !hermitian; ++k) {
        hermitian = exps[static_cast<size_t>(j)] == 1 &&
                    exps[static_cast<size_t>(n + 1 + k)] == 1 && deg == 2 &&
                    exps[static_cast<size_t>(iw)] == 0 && exps[static_cast<size_t>(iwb)] == 0;
      }
    }
    if (!hermitian) {
      throw ContractError("normalization left a stray quadratic term: " +
                          monomial_str(*sring, exps));
    }
  }

  std::vector<Series> old_from_new = compose_maps(compose_maps(map_a, map_c), map_b);
  std::vector<Series> new_from_old = invert_map(old_from_new);

  NormalizeResult out{Hypersurface(n, rho4), std::move(old_from_new), std::move(new_from_old),
                      std::move(unit_total), std::move(h)};
  return out;
}

bool graph_solvable(const Hypersurface& m) {
  const int n = m.n();
  Series sigma = m.rho().derivative(n) - m.rho().derivative(2 * n + 1);
  if (sigma.is_zero()) return false;
  return sigma.degree() == 0;
}

Point solve_point(const Hypersurface& m, const std::vector<CRat>& zvals, const Rational& u) {
  require_polynomial(m.rho(), "point sampling");
  if (!graph_solvable(m)) {
    throw ValidationError(
        "surface is not graph-solvable (rho_w - rho_wb is not a nonzero constant)");
  }
  const int n = m.n();
  if (static_cast<int>(zvals.size()) != n) throw ContractError("wrong number of z coordinates");
  // rho(z, u + iv, zb, u - iv) is affine in v: value = rho|_{v=0} + i c v.
  CRat c = (m.rho().derivative(n) - m.rho().derivative(2 * n + 1)).constant_term();
  Point flat{zvals, CRat(u)};
  CRat at_zero = m.rho().evaluate(point_args(flat));
  CRat v = -at_zero / (CRat::i() * c);
  if (!v.is_real()) throw ContractError("graph solve produced a non-real height");
  Point q{zvals, CRat(u, v.re)};
  if (!on_hypersurface(m, q)) throw ContractError("graph solve failed to land on the surface");
  return q;
}

std::vector<Point> sample_points(const Hypersurface& m, int count, std::uint64_t seed,
                                 bool require_levi) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-2, 2);
  std::uniform_int_distribution<int> den(2, 5);
  auto small_rational = [&]() { return make_rational(num(rng), den(rng)); };

  std::vector<Point> out;
  out.reserve(static_cast<size_t>(count));
  int guard = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++guard > 200 * count) {
      throw ValidationError("could not sample enough nondegenerate points on the surface");
    }
    std::vector<CRat> z(static_cast<size_t>(m.n()));
    for (CRat& c : z) c = CRat(small_rational(), small_rational());
    Point q = solve_point(m, z, small_rational());
    if (rho_w_at(m, q).is_zero()) continue;
    if (require_levi && levi_jacobian(m, q).is_zero()) continue;
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace crjet
