#pragma once

#include <vector>

#include "crjet/hypersurface.hpp"
#include "crjet/segre.hpp"

namespace crjet {

// The jet chart (z, w, xi): xi_j stands for the derivative w_{z_j}, stored as
// an offset from xi_center so that the expansion point of every series below
// is the one-jet of the Segre variety through the marked point.
RingPtr jet_ring(int n, int order);

// The conjugate parameters (zb, wb) of the Segre family solved as functions
// on the jet chart: the graph through (z, w) with slope xi is the Segre
// variety of the point whose conjugate coordinates are (A(z, w, xi),
// B(z, w, xi)).
struct ABSolution {
  RingPtr ring;  // jet_ring(n, order)
  std::vector<Series> A;
  Series B;
  std::vector<CRat> xi_center;
};

ABSolution solve_ab(const Hypersurface& m);

// The complete second-order system w_{z_k z_l} = Phi_kl(z, w, w') cut out by
// the Segre family of M.
struct PDESystem {
  int n = 0;
  RingPtr ring;  // jet_ring(n, order)
  std::vector<std::vector<Series>> phi;
  std::vector<CRat> xi_center;
};

PDESystem associated_pde(const Hypersurface& m);

// The total-derivative field along solutions,
// L_j = d/dz_j + xi_j d/dw + sum_s Phi_sj d/dxi_s, applied to f; exact
// through one degree less than f.
Series total_derivative_apply(const PDESystem& system, const Series& f, int j);

// L_j Phi_kl - L_k Phi_jl for j < k; identically zero through the trusted
// degree exactly when the jet-chart distribution cut out by the system is
// involutive. Reported as full series so a failure pinpoints the first bad
// coefficient.
struct IntegrabilityEntry {
  int j, k, l;
  Series residual;
};

std::vector<IntegrabilityEntry> integrability_residual(const PDESystem& system);

// Pullback coefficients of the contact forms along the lift
// z -> (z, w(z), w'(z)) of the Segre graph at q: omega0[l] is the dz_l
// coefficient of dw - sum xi_j dz_j, omega[k][l] that of
// dxi_k - sum Phi_kl dz_l. All of them vanish through the trusted degree.
struct ContactResidual {
  std::vector<Series> omega0;
  std::vector<std::vector<Series>> omega;
};

ContactResidual contact_residual(const Hypersurface& m, const Point& q);

// w_{z_k z_l}(z) - Phi_kl(z, w(z), w'(z)) for the Segre graph at q; the
// statement "Segre graphs solve the associated system" is the exact
// vanishing of these series through degree N - 2.
std::vector<std::vector<Series>> segre_pde_residual(const Hypersurface& m, const Point& q);

}  // namespace crjet
