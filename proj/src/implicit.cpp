#include "crjet/implicit.hpp"

#include <map>
#include <set>

#include "crjet/substitution.hpp"

namespace crjet {

namespace {

void validate_system(const ImplicitSystem& system) {
  if (system.equations.empty()) throw ContractError("implicit system has no equations");
  if (system.equations.size() != system.unknowns.size()) {
    throw ContractError("implicit system must be square (one equation per unknown)");
  }
  const RingPtr& ring = system.equations.front().ring();
  for (const Series& eq : system.equations) {
    if (!eq.ring()->same(*ring)) throw ContractError("implicit system mixes rings");
    if (!eq.constant_term().is_zero()) {
      throw ContractError("implicit system does not vanish at the origin");
    }
  }
  std::set<int> seen;
  for (int var : system.unknowns) {
    if (var < 0 || var >= ring->nvars()) throw ContractError("unknown variable index out of range");
    if (!seen.insert(var).second) throw ContractError("duplicate unknown in implicit system");
  }
}

}  // namespace

Matrix jacobian_at_origin(const ImplicitSystem& system) {
  const RingPtr& ring = system.equations.front().ring();
  const size_t m = system.equations.size();
  Matrix j0(m, std::vector<CRat>(m));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      j0[i][j] = system.equations[i].coefficient_key(
          ring->unit_key(system.unknowns[static_cast<size_t>(j)]));
    }
  }
  return j0;
}

std::vector<Series> implicit_solve(const ImplicitSystem& system, const RingPtr& solution_ring) {
  validate_system(system);
  const RingPtr& system_ring = system.equations.front().ring();
  const size_t m = system.equations.size();
  const int n = solution_ring->order();

  Matrix j0 = jacobian_at_origin(system);
  Matrix j0_inv;
  if (!try_invert(j0, j0_inv)) {
    throw SingularJacobianError(
        "implicit system has a singular Jacobian at the origin (determinant 0)",
        determinant(j0));
  }

  std::vector<Series> solution(m, Series(solution_ring));

  for (int d = 1; d <= n; ++d) {
    std::map<int, Series> assignment;
    for (size_t j = 0; j < m; ++j) {
      assignment.emplace(system.unknowns[j], solution[j]);
    }
    SubstitutionPlan plan(system_ring, solution_ring, std::move(assignment));

    // F(x, y_{<d}(x)) has its first error exactly in degree d; cancel it.
    std::map<std::uint64_t, std::vector<CRat>> residual_by_monomial;
    for (size_t i = 0; i < m; ++i) {
      Series r = plan.apply(system.equations[i], d);
      for (const auto& [key, value] : r.terms()) {
        if (solution_ring->total_degree(key) != d) continue;
        auto [it, inserted] =
            residual_by_monomial.try_emplace(key, std::vector<CRat>(m));
        it->second[i] = value;
      }
    }
    for (const auto& [key, rhs] : residual_by_monomial) {
      std::vector<CRat> correction = mat_vec(j0_inv, rhs);
      for (size_t j = 0; j < m; ++j) solution[j].add_term(key, -correction[j]);
    }
  }

  for (Series& s : solution) s.set_trusted(n);
  return solution;
}

std::vector<Series> implicit_residual(const ImplicitSystem& system, const RingPtr& solution_ring,
                                      const std::vector<Series>& solution) {
  validate_system(system);
  if (solution.size() != system.unknowns.size()) {
    throw ContractError("solution size does not match the system unknowns");
  }
  std::map<int, Series> assignment;
  for (size_t j = 0; j < solution.size(); ++j) {
    assignment.emplace(system.unknowns[j], solution[j]);
  }
  SubstitutionPlan plan(system.equations.front().ring(), solution_ring, std::move(assignment));
  std::vector<Series> residuals;
  residuals.reserve(system.equations.size());
  for (const Series& eq : system.equations) residuals.push_back(plan.apply(eq));
  return residuals;
}

}  // namespace crjet
