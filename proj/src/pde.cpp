#include "crjet/pde.hpp"

#include <algorithm>
#include <map>

#include "crjet/errors.hpp"
#include "crjet/substitution.hpp"

namespace crjet {

RingPtr jet_ring(int n, int order) {
  std::vector<std::string> names;
  for (int j = 0; j < n; ++j) names.push_back("z" + std::to_string(j + 1));
  names.push_back("w");
  for (int j = 0; j < n; ++j) names.push_back("xi" + std::to_string(j + 1));
  return Ring::make(std::move(names), order);
}

ABSolution solve_ab(const Hypersurface& m) {
  const int n = m.n();
  const int order = m.order();
  ComplexDefiner definer = complex_defining_equation(m);

  // System ring: jet chart plus the conjugate unknowns.
  std::vector<std::string> names;
  for (int j = 0; j < n; ++j) names.push_back("z" + std::to_string(j + 1));
  names.push_back("w");
  for (int j = 0; j < n; ++j) names.push_back("xi" + std::to_string(j + 1));
  for (int j = 0; j < n; ++j) names.push_back("zb" + std::to_string(j + 1));
  names.push_back("wb");
  RingPtr sys_ring = Ring::make(std::move(names), order);
  const int iw = n;
  auto ixi = [&](int j) { return n + 1 + j; };
  auto izb = [&](int j) { return 2 * n + 1 + j; };
  const int iwb = 3 * n + 1;

  Series theta = definer.theta.transport(sys_ring);

  // Equations (graph, derivative_1..derivative_n), unknowns (zb_1..zb_n, wb):
  // the same ordering as the Levi-jacobian convention.
  ImplicitSystem system;
  system.equations.push_back(theta - Series::variable(sys_ring, iw));
  std::vector<CRat> xi_center(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    Series theta_j = theta.derivative(j);
    xi_center[static_cast<size_t>(j)] = theta_j.constant_term();
    Series eq = theta_j - Series::variable(sys_ring, ixi(j)) -
                Series::constant(sys_ring, xi_center[static_cast<size_t>(j)]);
    system.equations.push_back(std::move(eq));
  }
  for (int j = 0; j < n; ++j) system.unknowns.push_back(izb(j));
  system.unknowns.push_back(iwb);

  RingPtr jring = jet_ring(n, order);
  std::vector<Series> solution;
  try {
    solution = implicit_solve(system, jring);
  } catch (const SingularJacobianError&) {
    throw SingularJacobianError(
        "the hypersurface is Levi-degenerate at the marked point (Jacobian determinant 0)",
        CRat(0));
  }

  ABSolution out{jring, {}, Series(jring), std::move(xi_center)};
  for (int j = 0; j < n; ++j) out.A.push_back(solution[static_cast<size_t>(j)]);
  out.B = solution[static_cast<size_t>(n)];
  return out;
}

PDESystem associated_pde(const Hypersurface& m) {
  const int n = m.n();
  ComplexDefiner definer = complex_defining_equation(m);
  ABSolution ab = solve_ab(m);

  std::map<int, Series> assignment;
  for (int j = 0; j < n; ++j) {
    assignment.emplace(definer.ring->index_of("zb" + std::to_string(j + 1)),
                       ab.A[static_cast<size_t>(j)]);
  }
  assignment.emplace(definer.ring->index_of("wb"), ab.B);
  SubstitutionPlan plan(definer.ring, ab.ring, std::move(assignment));

  PDESystem out;
  out.n = n;
  out.ring = ab.ring;
  out.xi_center = ab.xi_center;
  out.phi.assign(static_cast<size_t>(n),
                 std::vector<Series>(static_cast<size_t>(n), Series(ab.ring)));
  for (int k = 0; k < n; ++k) {
    Series theta_k = definer.theta.derivative(k);
    for (int l = 0; l < n; ++l) {
      out.phi[static_cast<size_t>(k)][static_cast<size_t>(l)] = plan.apply(theta_k.derivative(l));
    }
  }
  return out;
}

Series total_derivative_apply(const PDESystem& system, const Series& f, int j) {
  const int n = system.n;
  if (j < 0 || j >= n) throw ContractError("total derivative index out of range");
  if (!f.ring()->same(*system.ring)) {
    throw ContractError("total derivative applied to a series from another chart");
  }
  const int iw = n;
  auto ixi = [&](int s) { return n + 1 + s; };

  // xi_j as a coordinate function is the stored offset plus the chart center.
  Series xi_j = Series::variable(system.ring, ixi(j)) +
                Series::constant(system.ring, system.xi_center[static_cast<size_t>(j)]);
  Series out = f.derivative(j) + xi_j * f.derivative(iw);
  for (int s = 0; s < n; ++s) {
    Series df = f.derivative(ixi(s));
    if (df.is_zero()) continue;
    out += system.phi[static_cast<size_t>(s)][static_cast<size_t>(j)] * df;
  }
  return out;
}

std::vector<IntegrabilityEntry> integrability_residual(const PDESystem& system) {
  std::vector<IntegrabilityEntry> out;
  const int n = system.n;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        Series lhs = total_derivative_apply(
            system, system.phi[static_cast<size_t>(k)][static_cast<size_t>(l)], j);
        Series rhs = total_derivative_apply(
            system, system.phi[static_cast<size_t>(j)][static_cast<size_t>(l)], k);
        out.push_back(IntegrabilityEntry{j, k, l, lhs - rhs});
      }
    }
  }
  return out;
}

std::vector<std::vector<Series>> segre_pde_residual(const Hypersurface& m, const Point& q) {
  const int n = m.n();
  Hypersurface local = recenter(m, q);
  SegreGraph graph = segre_graph(local, origin_point(n));
  PDESystem system = associated_pde(local);

  // Lift of the graph into the jet chart, as series in z with the chart's
  // xi offsets removed.
  const RingPtr& zring = graph.taylor.ring();
  std::map<int, Series> lift;
  lift.emplace(system.ring->index_of("w"), graph.taylor);
  std::vector<Series> slopes;
  for (int s = 0; s < n; ++s) {
    Series slope = graph.taylor.derivative(s) -
                   Series::constant(zring, system.xi_center[static_cast<size_t>(s)]);
    lift.emplace(system.ring->index_of("xi" + std::to_string(s + 1)), slope);
  }
  SubstitutionPlan plan(system.ring, zring, std::move(lift));

  std::vector<std::vector<Series>> residual(
      static_cast<size_t>(n), std::vector<Series>(static_cast<size_t>(n), Series(zring)));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      Series second = graph.taylor.derivative(k).derivative(l);
      Series along = plan.apply(system.phi[static_cast<size_t>(k)][static_cast<size_t>(l)]);
      Series r = second - along;
      r.set_trusted(std::min(second.trusted(), along.trusted()));
      residual[static_cast<size_t>(k)][static_cast<size_t>(l)] = std::move(r);
    }
  }
  return residual;
}

ContactResidual contact_residual(const Hypersurface& m, const Point& q) {
  const int n = m.n();
  Hypersurface local = recenter(m, q);
  SegreGraph graph = segre_graph(local, origin_point(n));

  ContactResidual out;
  // The lift takes xi_l(z) := w_{z_l}(z), so the dz_l coefficient of the
  // pullback of omega_0 = dw - sum xi_l dz_l is w_{z_l} - xi_l.
  for (int l = 0; l < n; ++l) {
    Series dw_coeff = graph.taylor.derivative(l);
    Series xi_choice = graph.taylor.derivative(l);
    out.omega0.push_back(dw_coeff - xi_choice);
  }
  // dxi_k - sum_l Phi_kl dz_l pulls back to (w_{z_k z_l} - Phi_kl ∘ lift) dz_l.
  out.omega = segre_pde_residual(m, q);
  return out;
}

}  // namespace crjet
