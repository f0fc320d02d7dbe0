#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "crjet/hypersurface.hpp"

namespace crjet {

using Cx = std::complex<double>;

// A point of the affine one-jet chart, in double precision. This module is
// the only floating-point one in the library: the reflection has no closed
// form off the model quadric, so its root is found numerically.
struct JetPointC {
  std::vector<Cx> z;
  Cx w;
  std::vector<Cx> xi;
};

double jet_distance(const JetPointC& a, const JetPointC& b);

struct ReflectOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

struct ReflectionResult {
  JetPointC input;
  JetPointC output;
  double residual;   // max-norm of the incidence system at the accepted root
  int iterations;
};

// The reflection swaps a point-with-Segre-tangent for the reflected
// point-with-tangent: the output base is the parameter of the Segre variety
// whose one-jet at the input base matches the input, and the output slope is
// that of the Segre variety of the input base at the output base.
//
// The surface must be a polynomial in normalized coordinates (linear part
// exactly (i/2)(w - wb)); the incidence root is found by damped Newton
// iteration seeded with the closed form of the quadric part.
class ReflectionMap {
 public:
  explicit ReflectionMap(const Hypersurface& m);

  int n() const { return n_; }

  ReflectionResult reflect(const JetPointC& p, const ReflectOptions& opts = {}) const;

  // The point of the totally real jet lift of M above (z, Re w = u): the base
  // point of M over (z, u) together with the complex-tangent slope.
  JetPointC lift_on_mj(const std::vector<Cx>& z, double u) const;

  // Closed-form reflection of the quadric part; exact when the surface is
  // the quadric itself, otherwise the Newton seed.
  JetPointC quadric_reflection(const JetPointC& p) const;

 private:
  struct DPoly {
    std::vector<MultiIndex> exps;
    std::vector<Cx> coeffs;
    Cx eval(const std::vector<Cx>& args) const;
  };

  std::vector<Cx> equations(const JetPointC& p, const std::vector<Cx>& unknowns) const;
  std::vector<std::vector<Cx>> jacobian(const JetPointC& p, const std::vector<Cx>& unknowns) const;
  std::vector<Cx> args_for(const JetPointC& p, const std::vector<Cx>& unknowns) const;

  int n_;
  bool graph_solvable_;
  Cx graph_const_;                       // rho_w - rho_wb (constant by construction)
  std::vector<std::vector<Cx>> hermitian_;
  DPoly rho_;
  std::vector<DPoly> rho_z_;             // j = 0..n-1
  DPoly rho_w_;
  std::vector<DPoly> rho_conj_;          // d/dzb_k, then d/dwb
  std::vector<std::vector<DPoly>> rho_z_conj_;  // [j][k]: d^2/dz_j dX_k
  std::vector<DPoly> rho_w_conj_;        // d^2/dw dX_k
};

struct InvolutionReport {
  int requested = 0;
  int converged = 0;
  int failed = 0;  // non-fatal convergence failures, counted per sample
  double max_involution_deviation = 0.0;  // |tau(tau(p)) - p| over off-lift samples
  double max_fixed_deviation = 0.0;       // |tau(p) - p| over lift samples
  double tol = 0.0;
  bool pass = false;
};

// Samples the chart near the origin (radius 1/4): half the samples on the
// jet lift of M (fixed-set check), half nearby (involution check).
InvolutionReport involution_check(const Hypersurface& m, int samples, double tol,
                                  std::uint64_t seed);

// Max-norm finite-difference Wirtinger derivative of the reflection with
// respect to the unconjugated chart coordinates; near zero exactly when the
// map is anti-holomorphic at p.
double antiholomorphy_defect(const ReflectionMap& map, const JetPointC& p, double step);

}  // namespace crjet
