#include "crjet/linalg.hpp"

#include "crjet/errors.hpp"

namespace crjet {

CRat determinant(Matrix m) {
  const size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw ContractError("determinant of a non-square matrix");
  }
  CRat det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return CRat(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    CRat inv = CRat(1) / m[col][col];
    for (size_t row = col + 1; row < n; ++row) {
      if (m[row][col].is_zero()) continue;
      CRat factor = m[row][col] * inv;
      for (size_t k = col; k < n; ++k) m[row][k] -= factor * m[col][k];
    }
  }
  return det;
}

bool try_invert(const Matrix& m, Matrix& out) {
  const size_t n = m.size();
  Matrix work = m;
  Matrix inv(n, std::vector<CRat>(n));
  for (size_t i = 0; i < n; ++i) inv[i][i] = CRat(1);

  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && work[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return false;
    std::swap(work[pivot], work[col]);
    std::swap(inv[pivot], inv[col]);
    CRat scale = CRat(1) / work[col][col];
    for (size_t k = 0; k < n; ++k) {
      work[col][k] *= scale;
      inv[col][k] *= scale;
    }
    for (size_t row = 0; row < n; ++row) {
      if (row == col || work[row][col].is_zero()) continue;
      CRat factor = work[row][col];
      for (size_t k = 0; k < n; ++k) {
        work[row][k] -= factor * work[col][k];
        inv[row][k] -= factor * inv[col][k];
      }
    }
  }
  out = std::move(inv);
  return true;
}

std::vector<CRat> mat_vec(const Matrix& m, const std::vector<CRat>& v) {
  std::vector<CRat> out(m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = 0; j < v.size(); ++j) out[i].add_mul(m[i][j], v[j]);
  }
  return out;
}

}  // namespace crjet
