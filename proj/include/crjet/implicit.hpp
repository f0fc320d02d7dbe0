#pragma once

#include <string>
#include <vector>

#include "crjet/errors.hpp"
#include "crjet/linalg.hpp"
#include "crjet/series.hpp"

namespace crjet {

// The Jacobian with respect to the unknowns is singular at the origin; for
// the Segre systems this is exactly Levi degeneracy, and the error carries
// the (vanishing) Jacobian determinant.
class SingularJacobianError : public ValidationError {
 public:
  SingularJacobianError(const std::string& what, CRat jacobian_det)
      : ValidationError(what, "levi-degenerate"), det_(std::move(jacobian_det)) {}

  const CRat& jacobian_determinant() const noexcept { return det_; }

 private:
  CRat det_;
};

// A square formal system F(x, y) = 0: the equations live in a ring holding
// both the x-variables and the unknowns y, with one equation per unknown.
struct ImplicitSystem {
  std::vector<Series> equations;
  std::vector<int> unknowns;  // variable indices of the y-block in the system ring
};

// The Jacobian dF/dy at the origin.
Matrix jacobian_at_origin(const ImplicitSystem& system);

// Solves F(x, y(x)) = 0 for the unique formal y with y(0) = 0, degree by
// degree up to the truncation order of `solution_ring` (which must contain
// every x-variable by name).
//
// Preconditions: F(0) = 0 and dF/dy invertible at 0; violations raise
// ContractError and SingularJacobianError respectively.
std::vector<Series> implicit_solve(const ImplicitSystem& system, const RingPtr& solution_ring);

// Substitutes a candidate solution back into the system; the result is the
// residual vector in the solution ring (identically zero for a true
// solution, through the trusted degree).
std::vector<Series> implicit_residual(const ImplicitSystem& system, const RingPtr& solution_ring,
                                      const std::vector<Series>& solution);

}  // namespace crjet
