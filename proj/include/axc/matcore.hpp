#pragma once

// Dense complex-matrix primitives. Every floating-point judgment (rank,
// positivity, residual size) in the library goes through ToleranceConfig.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "axc/error.hpp"

namespace axc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

struct ToleranceConfig {
  double rank_rtol = 1e-10;
  double psd_atol = 1e-10;
  double residual_atol = 1e-9;

  /// Throws a Parse error unless all three lie in (0, 1).
  void validate() const {
    auto check = [](double v, const char* name) {
      if (!(v > 0.0 && v < 1.0)) {
        throw Error(ErrorKind::Parse,
                    std::string(name) + " must lie strictly in (0, 1)");
      }
    };
    check(rank_rtol, "rank_rtol");
    check(psd_atol, "psd_atol");
    check(residual_atol, "residual_atol");
  }
};

/// Least mu with CC* <= mu AA*. `finite == false` means no such mu exists
/// and `mu_star` is meaningless.
struct MajorizationResult {
  bool finite = false;
  double mu_star = 0.0;
};

inline bool all_finite(const Matrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

inline Matrix adjoint(const Matrix& m) { return m.adjoint(); }

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

/// Spectral (operator) norm.
inline double opnorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double hermitian_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return opnorm(m - m.adjoint());
}

/// residual <= residual_atol * max(1, scale)
inline bool small_residual(double residual, double scale, const ToleranceConfig& tol) {
  return residual <= tol.residual_atol * std::max(1.0, scale);
}

inline void require_same_rows(const Matrix& a, const Matrix& c, const char* what) {
  if (a.rows() != c.rows()) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(what) + ": row counts differ (" + std::to_string(a.rows()) +
                    " vs " + std::to_string(c.rows()) + ")");
  }
}

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " must be square");
  }
}

/// Orthonormal basis of a column space together with its singular values.
struct RangeBasis {
  Matrix basis;        // rows x rank, orthonormal columns
  RealVector values;   // rank nonzero singular values, descending
  Eigen::Index rank() const { return basis.cols(); }
};

/// Column space of `m` under the rank cutoff sigma < rank_rtol * sigma_max.
/// For a computed product pass the product of the factor norms as
/// `reference`; the cutoff becomes rank_rtol * max(sigma_max, reference), so
/// a product that vanishes up to roundoff has rank zero.
inline RangeBasis column_range(const Matrix& m, const ToleranceConfig& tol,
                               double reference = 0.0) {
  if (m.size() == 0) return {Matrix(m.rows(), 0), RealVector(0)};
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const RealVector& sv = svd.singularValues();
  const double cutoff = tol.rank_rtol * std::max(sv(0), reference);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff && sv(r) > 0.0) ++r;
  return {svd.matrixU().leftCols(r), sv.head(r)};
}

inline Eigen::Index numerical_rank(const Matrix& m, const ToleranceConfig& tol,
                                   double reference = 0.0) {
  return column_range(m, tol, reference).rank();
}

/// Orthogonal projector onto the column space of `m`.
inline Matrix range_projector(const Matrix& m, const ToleranceConfig& tol) {
  const RangeBasis rb = column_range(m, tol);
  return rb.basis * rb.basis.adjoint();
}

/// Moore-Penrose inverse via SVD; singular values below rank_rtol * sigma_max
/// are treated as zero. The zero matrix maps to the zero matrix of
/// transposed shape.
inline Matrix pinv(const Matrix& m, const ToleranceConfig& tol) {
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double cutoff = tol.rank_rtol * sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cutoff || sv(i) == 0.0) break;
    out += svd.matrixV().col(i) * (1.0 / sv(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

/// Smallest eigenvalue of the Hermitian part of a square matrix.
inline double min_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double max_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// Hermitian within residual_atol and min eigenvalue >= -psd_atol * max(1, |M|).
inline bool is_psd(const Matrix& m, const ToleranceConfig& tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double norm = opnorm(m);
  if (!small_residual(hermitian_defect(m), norm, tol)) return false;
  return min_eigenvalue(m) >= -tol.psd_atol * std::max(1.0, norm);
}

/// Hermitian PSD square root. Eigenvalues in [-psd_atol*|M|, 0) are clamped
/// to zero; anything more negative is NotPSD.
inline Matrix sqrt_psd(const Matrix& m, const ToleranceConfig& tol) {
  require_square(m, "sqrt_psd");
  if (m.size() == 0) return m;
  const double norm = opnorm(m);
  if (!small_residual(hermitian_defect(m), norm, tol)) {
    throw Error(ErrorKind::NotHermitian, "sqrt_psd input is not Hermitian",
                hermitian_defect(m));
  }
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector ev = es.eigenvalues();
  if (ev(0) < -tol.psd_atol * norm) {
    throw Error(ErrorKind::NotPSD, "sqrt_psd input has a negative eigenvalue", ev(0));
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Partial isometry U_A of the polar decomposition A = U_A (A*A)^{1/2},
/// with U_A* U_A the projector onto the row space of A.
inline Matrix polar_partial_isometry(const Matrix& a, const ToleranceConfig& tol) {
  Matrix u = Matrix::Zero(a.rows(), a.cols());
  if (a.size() == 0) return u;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double cutoff = tol.rank_rtol * sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cutoff || sv(i) == 0.0) break;
    u += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
  }
  return u;
}

/// Residual |A A^+ C - C| of the range inclusion R(C) in R(A).
inline double range_residual(const Matrix& a, const Matrix& c, const ToleranceConfig& tol) {
  require_same_rows(a, c, "range_inclusion");
  return opnorm(a * (pinv(a, tol) * c) - c);
}

inline bool range_inclusion(const Matrix& a, const Matrix& c, const ToleranceConfig& tol) {
  return small_residual(range_residual(a, c, tol), opnorm(c), tol);
}

/// Least t with F F* <= t W, where W = V diag(weights) V* is PSD and given
/// through an orthonormal basis of its range. Finite iff R(F) lies in R(W);
/// then t is the top eigenvalue of W^{+1/2} F F* W^{+1/2} on R(W).
inline MajorizationResult least_loewner_scale(const Matrix& factor, const RangeBasis& weight,
                                              const ToleranceConfig& tol) {
  const Matrix outside = factor - weight.basis * (weight.basis.adjoint() * factor);
  if (!small_residual(opnorm(outside), opnorm(factor), tol)) return {false, 0.0};
  if (weight.rank() == 0) return {true, 0.0};
  const RealVector inv_sqrt = weight.values.cwiseSqrt().cwiseInverse();
  const Matrix scaled = inv_sqrt.cast<Complex>().asDiagonal() * weight.basis.adjoint() * factor;
  const Matrix gram = scaled * scaled.adjoint();
  return {true, std::max(0.0, max_eigenvalue(gram))};
}

/// Least t with F F* <= t W for a Hermitian PSD weight W (eigenvalues below
/// rank_rtol * max(top eigenvalue, reference) are its kernel).
inline MajorizationResult least_loewner_scale(const Matrix& factor, const Matrix& weight,
                                              const ToleranceConfig& tol,
                                              double reference = 0.0) {
  require_square(weight, "least_loewner_scale weight");
  require_same_rows(weight, factor, "least_loewner_scale");
  RangeBasis rb{Matrix(weight.rows(), 0), RealVector(0)};
  if (weight.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (weight + weight.adjoint()));
    const RealVector& ev = es.eigenvalues();
    const double top = std::max({0.0, ev(ev.size() - 1), reference});
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
      if (ev(i) > tol.rank_rtol * top && ev(i) > 0.0) keep.push_back(i);
    }
    rb.basis.resize(weight.rows(), static_cast<Eigen::Index>(keep.size()));
    rb.values.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const auto j = static_cast<Eigen::Index>(k);
      rb.basis.col(j) = es.eigenvectors().col(keep[k]);
      rb.values(j) = ev(keep[k]);
    }
  }
  return least_loewner_scale(factor, rb, tol);
}

/// mu* = inf{ mu : CC* <= mu AA* }.
inline MajorizationResult min_majorization_scale(const Matrix& a, const Matrix& c,
                                                 const ToleranceConfig& tol) {
  require_same_rows(a, c, "min_majorization_scale");
  RangeBasis rb = column_range(a, tol);
  rb.values = rb.values.cwiseAbs2();  // eigenvalues of AA*
  return least_loewner_scale(c, rb, tol);
}

}  // namespace axc
