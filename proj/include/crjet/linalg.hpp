#pragma once

#include <vector>

#include "crjet/rational.hpp"

namespace crjet {

using Matrix = std::vector<std::vector<CRat>>;

// Exact determinant by fraction-preserving Gaussian elimination.
CRat determinant(Matrix m);

// Exact inverse; returns false (and leaves out untouched) when singular.
bool try_invert(const Matrix& m, Matrix& out);

std::vector<CRat> mat_vec(const Matrix& m, const std::vector<CRat>& v);

}  // namespace crjet
