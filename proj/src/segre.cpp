#include "crjet/segre.hpp"

#include <algorithm>

#include "crjet/errors.hpp"
#include "crjet/substitution.hpp"

namespace crjet {

namespace {

// Enumerates multi-indices over nvars variables with total degree exactly d.
void enumerate_indices(int nvars, int d, MultiIndex& scratch, size_t pos,
                       std::vector<MultiIndex>& out) {
  if (pos + 1 == scratch.size()) {
    scratch[pos] = d;
    out.push_back(scratch);
    return;
  }
  for (int e = 0; e <= d; ++e) {
    scratch[pos] = e;
    enumerate_indices(nvars, d - e, scratch, pos + 1, out);
  }
}

std::vector<MultiIndex> indices_of_degree(int nvars, int d) {
  std::vector<MultiIndex> out;
  MultiIndex scratch(static_cast<size_t>(nvars), 0);
  enumerate_indices(nvars, d, scratch, 0, out);
  return out;
}

CRat factorial_of(const MultiIndex& m) {
  Rational f(1);
  for (int e : m) {
    for (int k = 2; k <= e; ++k) f *= k;
  }
  return CRat(f);
}

Series det3(const Series m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

CRat det3_values(const CRat m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

std::vector<CRat> SegreGraph::gradient() const {
  const int n = taylor.ring()->nvars();
  std::vector<CRat> out(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    out[static_cast<size_t>(j)] = taylor.coefficient_key(taylor.ring()->unit_key(j));
  }
  return out;
}

SegreGraph segre_graph(const Hypersurface& m, const Point& q) {
  if (!on_hypersurface(m, q)) {
    throw DomainError("Segre graph requested at a point off the hypersurface");
  }
  if (rho_w_at(m, q).is_zero()) {
    throw BadCoordinatesError("rho_w vanishes at the point; the Segre variety is not a w-graph");
  }
  Hypersurface local = recenter(m, q);
  const int n = m.n();
  const int order = m.order();

  // Freeze the conjugate block at the (recentered) base point: the graph of
  // S_q solves rho(z, g(z), 0, 0) = 0.
  RingPtr mring = map_ring(n, order);
  std::map<int, Series> freeze;
  for (int j = 0; j < n; ++j) freeze.emplace(n + 1 + j, Series(mring));
  freeze.emplace(2 * n + 1, Series(mring));
  SubstitutionPlan restrict_plan(local.rho().ring(), mring, std::move(freeze));
  Series frozen = restrict_plan.apply(local.rho());

  ImplicitSystem system{{frozen}, {n}};
  Series g = implicit_solve(system, z_ring(n, order))[0];
  return SegreGraph{q, std::move(g)};
}

std::vector<CRat> SegreJet::gradient() const {
  const size_t n = base.z.size();
  std::vector<CRat> out(n);
  MultiIndex m(n, 0);
  for (size_t j = 0; j < n; ++j) {
    std::fill(m.begin(), m.end(), 0);
    m[j] = 1;
    out[j] = derivatives[1].at(m);
  }
  return out;
}

std::vector<std::vector<CRat>> SegreJet::hessian() const {
  const size_t n = base.z.size();
  std::vector<std::vector<CRat>> out(n, std::vector<CRat>(n));
  MultiIndex m(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      std::fill(m.begin(), m.end(), 0);
      m[i] += 1;
      m[j] += 1;
      out[i][j] = derivatives[2].at(m);
    }
  }
  return out;
}

SegreJet segre_jet(const Hypersurface& m, const Point& q, int k) {
  if (k < 0) throw ContractError("jet order must be non-negative");
  if (k > m.order() - 1) {
    throw TruncationError("jet order " + std::to_string(k) +
                          " exceeds what truncation order " + std::to_string(m.order()) +
                          " supports (k <= N - 1)");
  }
  SegreGraph graph = segre_graph(m, q);
  SegreJet jet{q, k, {}};
  jet.derivatives.resize(static_cast<size_t>(k) + 1);
  for (int r = 0; r <= k; ++r) {
    for (const MultiIndex& idx : indices_of_degree(m.n(), r)) {
      CRat value = factorial_of(idx) * graph.taylor.coefficient(idx);
      if (r == 0) value = q.w;  // the graph passes through q
      jet.derivatives[static_cast<size_t>(r)].emplace(idx, std::move(value));
    }
  }
  return jet;
}

std::vector<std::vector<Series>> phi_determinant(const Hypersurface& m) {
  const int n = m.n();
  const RingPtr& ring = m.rho().ring();
  const Series& rho = m.rho();
  Series rho_w = rho.derivative(n);
  if (rho_w.constant_term().is_zero()) {
    throw BadCoordinatesError("rho_w(0) = 0: the two-jet determinant needs a w-graph chart");
  }
  Series inv3 = rho_w.inverse().pow(3);

  std::vector<Series> rho_z, rho_zw;
  rho_z.reserve(static_cast<size_t>(n));
  rho_zw.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    rho_z.push_back(rho.derivative(j));
    rho_zw.push_back(rho_z.back().derivative(n));
  }
  Series rho_ww = rho_w.derivative(n);

  std::vector<std::vector<Series>> phi(static_cast<size_t>(n),
                                       std::vector<Series>(static_cast<size_t>(n), Series(ring)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Series entries[3][3] = {
          {rho, rho_z[static_cast<size_t>(j)], rho_w},
          {rho_z[static_cast<size_t>(i)], rho_z[static_cast<size_t>(i)].derivative(j),
           rho_zw[static_cast<size_t>(i)]},
          {rho_w, rho_zw[static_cast<size_t>(j)], rho_ww},
      };
      phi[static_cast<size_t>(i)][static_cast<size_t>(j)] = det3(entries) * inv3;
    }
  }
  return phi;
}

std::vector<std::vector<CRat>> phi_determinant_at(const Hypersurface& m, const Point& q) {
  const int n = m.n();
  if (!on_hypersurface(m, q)) {
    throw DomainError("the two-jet determinant is evaluated on the hypersurface only");
  }
  std::vector<CRat> args = point_args(q);
  const Series& rho = m.rho();

  CRat vw = rho.derivative(n).evaluate(args);
  if (vw.is_zero()) {
    throw BadCoordinatesError("rho_w vanishes at the point; rotate coordinates first");
  }
  CRat inv3 = CRat(1) / (vw * vw * vw);

  std::vector<CRat> vz(static_cast<size_t>(n)), vzw(static_cast<size_t>(n));
  std::vector<Series> rho_z;
  for (int j = 0; j < n; ++j) {
    rho_z.push_back(rho.derivative(j));
    vz[static_cast<size_t>(j)] = rho_z.back().evaluate(args);
    vzw[static_cast<size_t>(j)] = rho_z.back().derivative(n).evaluate(args);
  }
  CRat vww = rho.derivative(n).derivative(n).evaluate(args);

  std::vector<std::vector<CRat>> phi(static_cast<size_t>(n), std::vector<CRat>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CRat vzz = rho_z[static_cast<size_t>(i)].derivative(j).evaluate(args);
      CRat entries[3][3] = {
          {CRat(0), vz[static_cast<size_t>(j)], vw},
          {vz[static_cast<size_t>(i)], vzz, vzw[static_cast<size_t>(i)]},
          {vw, vzw[static_cast<size_t>(j)], vww},
      };
      phi[static_cast<size_t>(i)][static_cast<size_t>(j)] = det3_values(entries) * inv3;
    }
  }
  return phi;
}

std::vector<std::vector<CRat>> phi_oracle(const Hypersurface& m, const Point& q) {
  return segre_jet(m, q, 2).hessian();
}

}  // namespace crjet
