#pragma once

#include <map>
#include <vector>

#include "crjet/hypersurface.hpp"

namespace crjet {

// The formal Segre variety of M at q = (a, b), as the graph w = b + g(z - a)
// with g a series over z_ring(n, order) and g(0) = 0.
struct SegreGraph {
  Point base;
  Series taylor;  // g, in powers of (z - a)

  // First derivatives of the graph at the base point.
  std::vector<CRat> gradient() const;
};

SegreGraph segre_graph(const Hypersurface& m, const Point& q);

// All partial derivatives of the Segre graph at its base point, by order:
// derivatives[r] maps each multi-index of total degree r to the exact value
// of the corresponding partial derivative.
struct SegreJet {
  Point base;
  int order;
  std::vector<std::map<MultiIndex, CRat>> derivatives;

  std::vector<CRat> gradient() const;
  // The symmetric matrix of second derivatives.
  std::vector<std::vector<CRat>> hessian() const;
};

SegreJet segre_jet(const Hypersurface& m, const Point& q, int k);

// The bordered-determinant two-jet function: for each (i, j),
//
//   Phi_ij = det [ rho      rho_{z_j}     rho_w     ]
//                [ rho_{z_i} rho_{z_i z_j} rho_{z_i w}]  / (rho_w)^3,
//                [ rho_w    rho_{z_j w}   rho_{ww}  ]
//
// returned as exact series over the surface ring. Every entry is computed
// from its own determinant; the symmetry Phi_ij = Phi_ji is a theorem about
// the formula, not an implementation shortcut.
std::vector<std::vector<Series>> phi_determinant(const Hypersurface& m);

// The same determinants evaluated exactly at a point of M (the corner entry
// rho vanishes there). This is the pointwise form matched against the
// implicit-differentiation oracle.
std::vector<std::vector<CRat>> phi_determinant_at(const Hypersurface& m, const Point& q);

// Second derivatives of the Segre graph at q, computed by recentering and
// implicit differentiation alone. The independent cross-check for
// phi_determinant: the two share no code beyond the defining series.
std::vector<std::vector<CRat>> phi_oracle(const Hypersurface& m, const Point& q);

}  // namespace crjet
