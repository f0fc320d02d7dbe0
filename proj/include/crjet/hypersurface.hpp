#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crjet/implicit.hpp"
#include "crjet/linalg.hpp"
#include "crjet/series.hpp"

namespace crjet {

// Chart rings. Variable order is fixed everywhere: z1..zn, w, then the
// conjugate block zb1..zbn, wb; jet charts use z1..zn, w, xi1..xin.
RingPtr surface_ring(int n, int order);  // (z, w, zb, wb)
RingPtr theta_ring(int n, int order);    // (z, zb, wb)
RingPtr graph_ring(int n, int order);    // (z, zb, u) with u = Re w
RingPtr map_ring(int n, int order);      // (z, w): holomorphic coordinates
RingPtr z_ring(int n, int order);        // (z)

// A point of C^{n+1} with exact coordinates.
struct Point {
  std::vector<CRat> z;
  CRat w;
};

Point origin_point(int n);
// (z, w, conj z, conj w): the argument vector for evaluating a defining
// series at (q, conj q).
std::vector<CRat> point_args(const Point& q);

// Swaps the (z, w) block with the (zb, wb) block and conjugates every
// coefficient; a series is a real function exactly when it is fixed by this.
Series conjugate_swap(const Series& s);

// Throws RealityError naming the first offending coefficient pair.
void validate_reality(const Series& rho);

// A real hypersurface germ through a marked point: the complexified defining
// series rho(z, w, zb, wb), centered at the marked point, with rho real,
// rho(0) = 0 and d rho(0) != 0.
class Hypersurface {
 public:
  Hypersurface(int n, Series rho);
  Hypersurface(int n, Series rho, Point base);

  // Builds rho from the graph presentation Im w = phi(z, conj z, Re w):
  // rho = phi|_{u = (w + wb)/2} + (i/2)(w - wb). phi lives in
  // graph_ring(n, order) and must be a real series vanishing at 0.
  static Hypersurface from_graph_form(int n, const Series& phi);

  int n() const { return n_; }
  int order() const { return rho_.order(); }
  const Series& rho() const { return rho_; }
  const Point& base() const { return base_; }

 private:
  int n_;
  Series rho_;
  Point base_;
};

// rho(q, conj q); exact, so q must be given in the chart of the (polynomial)
// defining series.
CRat rho_value_at(const Hypersurface& m, const Point& q);
CRat rho_w_at(const Hypersurface& m, const Point& q);
bool on_hypersurface(const Hypersurface& m, const Point& q);

// Exact recentering of the germ at a point of M (polynomial series only).
Hypersurface recenter(const Hypersurface& m, const Point& q);

// The solved form w = theta(z, zb, wb) of rho = 0.
struct ComplexDefiner {
  RingPtr ring;  // theta_ring(n, order)
  Series theta;
};

ComplexDefiner complex_defining_equation(const Hypersurface& m);

// Determinant of the Jacobian, with respect to the conjugate parameters
// (zb_1..zb_n, wb), of the system (w = theta, w_{z_j} = theta_{z_j}),
// rows in that order, evaluated at q. Nonzero exactly when M is
// Levi-nondegenerate at q; the value itself is convention-bound (the model
// quadric gives -2i), only its vanishing is geometric.
CRat levi_jacobian(const Hypersurface& m, const Point& q);

// Result of the degree-2 normalization: coordinates in which
// rho = Q(z, zb) + (i/2)(w - wb) + (degree >= 3), with Q Hermitian positive
// definite (not rescaled to the identity, which would need irrational
// scalings).
struct NormalizeResult {
  Hypersurface surface;
  // Holomorphic polynomial map of degree <= 2 expressing the old coordinates
  // in terms of the new ones; components over map_ring(n, order).
  std::vector<Series> old_from_new;
  // Formal inverse of old_from_new through degree N.
  std::vector<Series> new_from_old;
  // Real unit E with rho_new = E * (rho ∘ old_from_new).
  Series unit;
  // The Hermitian form Q.
  Matrix levi_form;
};

NormalizeResult normalize_to_quadric(const Hypersurface& m);

// Substitutes z_j -> components[j], w -> components[n] (and the conjugate
// block accordingly) into a surface-ring series. Components live in
// map_ring and must vanish at 0.
Series apply_holomorphic_map(const Series& s, const std::vector<Series>& components);

// Composition f ∘ g of holomorphic polynomial maps given by components over
// map_ring.
std::vector<Series> compose_maps(const std::vector<Series>& f, const std::vector<Series>& g);

// Formal inverse of a holomorphic map fixing 0 with invertible linear part.
std::vector<Series> invert_map(const std::vector<Series>& f);

// True when rho(z, u + iv, zb, u - iv) is affine in v with a constant
// nonzero v-coefficient, so that points of M with rational coordinates can
// be produced exactly from rational (z, u). Graph-form surfaces always
// qualify.
bool graph_solvable(const Hypersurface& m);

// The unique point (zvals, u + iv) of M above (zvals, u); requires
// graph_solvable.
Point solve_point(const Hypersurface& m, const std::vector<CRat>& zvals, const Rational& u);

// Deterministic small-rational points of M near the marked point at which
// rho_w is nonzero (and, unless require_levi is cleared, the Levi jacobian
// too). Requires graph_solvable.
std::vector<Point> sample_points(const Hypersurface& m, int count, std::uint64_t seed,
                                 bool require_levi = true);

}  // namespace crjet
