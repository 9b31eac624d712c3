#pragma once

#include <cmath>
#include <initializer_list>

#include "axc/matcore.hpp"

namespace fixtures {

using axc::Complex;
using axc::Matrix;

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const Complex& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Matrix diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

// A = diag(1, 0), C = [[2, 1], [0, 0]]: CA* is PSD but A^+ C is not Hermitian.
inline Matrix ex_a() { return diag({1, 0}); }
inline Matrix ex_c() { return mat({{2, 1}, {0, 0}}); }

// A = diag(1, 1, 0), C = E11 + E23: Hermitian solutions exist, positive ones do not.
inline Matrix rk_a() { return diag({1, 1, 0}); }
inline Matrix rk_c() { return mat({{1, 0, 0}, {0, 0, 1}, {0, 0, 0}}); }

// Disjoint ranges: AX = C has no solution.
inline Matrix dj_a() { return diag({0, 1}); }
inline Matrix dj_c() { return diag({1, 0}); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace fixtures
