#pragma once

// Solutions of the operator equation AX = C for complex matrices: the
// reduced solution, the general/Hermitian/positive solution families, the
// solvability criteria, and the T_n diagnostic for positive solvability.
//
// In finite dimensions every matrix has closed range, so A, CA* and DP are
// automatically regular and the polar decomposition always exists.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "axc/matcore.hpp"

namespace axc::douglas {

enum class Verdict { Unsolvable, SolvableGeneral, SolvableHermitian, SolvablePositive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Unsolvable: return "Unsolvable";
    case Verdict::SolvableGeneral: return "SolvableGeneral";
    case Verdict::SolvableHermitian: return "SolvableHermitian";
    case Verdict::SolvablePositive: return "SolvablePositive";
  }
  return "Unsolvable";
}

enum class SolutionKind { General, Hermitian, Positive };

inline std::string_view to_string(SolutionKind k) {
  switch (k) {
    case SolutionKind::General: return "General";
    case SolutionKind::Hermitian: return "Hermitian";
    case SolutionKind::Positive: return "Positive";
  }
  return "General";
}

enum class LambdaStatus { Converged, Divergent, Inconclusive };

inline std::string_view to_string(LambdaStatus s) {
  switch (s) {
    case LambdaStatus::Converged: return "converged";
    case LambdaStatus::Divergent: return "divergent";
    case LambdaStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// Nonnegative scalar with an explicit infinity flag.
struct ExtendedReal {
  bool finite = false;
  double value = 0.0;

  static ExtendedReal infinite() { return {false, 0.0}; }
  static ExtendedReal of(double v) { return {true, v}; }
};

/// Estimate of sup_n |T_n| from the doubling schedule n = 1, 2, 4, ..., horizon.
struct LambdaEstimate {
  double value = 0.0;  // |T_horizon|
  LambdaStatus status = LambdaStatus::Inconclusive;
  std::uint64_t horizon = 0;
};

/// Quantities backing a negative verdict. `failed_condition` is empty when
/// every tested condition holds.
struct Certificate {
  std::string failed_condition;
  double range_residual = 0.0;
  double hermitian_defect = 0.0;
  std::optional<double> ca_star_min_eigenvalue;
  std::optional<double> dp_range_residual;
};

struct SolvabilityReport {
  bool range_ok = false;
  bool ca_star_hermitian = false;
  std::optional<bool> ca_star_psd;
  std::optional<ExtendedReal> t_min;
  std::optional<bool> dp_range_eq;
  std::optional<LambdaEstimate> lambda_estimate;
  Verdict verdict = Verdict::Unsolvable;
  /// t_min finite <=> (range_ok && ca_star_psd && dp_range_eq)
  std::optional<bool> criteria_agree;
  Certificate certificate;
};

struct SolutionFamily {
  Matrix reduced;      // D
  Matrix projector_p;  // P = U_A* U_A
  Matrix complement;   // I - P
  std::optional<Matrix> x_zero;
  SolutionKind kind = SolutionKind::General;
};

inline constexpr std::uint64_t kDefaultHorizon = std::uint64_t{1} << 60;

/// P = U_A* U_A, the projector onto the row space of A.
inline Matrix row_space_projector(const Matrix& a, const ToleranceConfig& tol) {
  const Matrix u = polar_partial_isometry(a, tol);
  return u.adjoint() * u;
}

/// D = A^+ C, the unique solution with range inside R(A*).
inline Matrix reduced_solution(const Matrix& a, const Matrix& c, const ToleranceConfig& tol) {
  const double residual = range_residual(a, c, tol);
  if (!small_residual(residual, opnorm(c), tol)) {
    throw Error(ErrorKind::NotSolvable, "R(C) is not contained in R(A)", residual);
  }
  return pinv(a, tol) * c;
}

namespace detail {

inline void require_square_target(const Matrix& a, const Matrix& c, const char* what) {
  require_same_rows(a, c, what);
  if (c.cols() != a.cols()) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(what) + ": C must have as many columns as A (X is square)");
  }
}

inline void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                          const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(what) + " must be " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
}

struct RangeEquality {
  bool equal = false;
  double residual = 0.0;
};

/// R(D) = R(DP): the mutual projector residual |(I - Pi_DP) D| and the
/// numerical ranks must agree (R(DP) is always inside R(D)).
inline RangeEquality dp_range_equality(const Matrix& d, const Matrix& p,
                                       const ToleranceConfig& tol) {
  const double d_norm = opnorm(d);
  const RangeBasis rb = column_range(d * p, tol, d_norm);
  const double residual = opnorm(d - rb.basis * (rb.basis.adjoint() * d));
  const bool equal =
      small_residual(residual, d_norm, tol) && rb.rank() == numerical_rank(d, tol);
  return {equal, residual};
}

}  // namespace detail

inline SolutionFamily solution_family(const Matrix& a, const Matrix& c, SolutionKind kind,
                                      const ToleranceConfig& tol) {
  SolutionFamily fam;
  fam.kind = kind;
  fam.reduced = reduced_solution(a, c, tol);
  fam.projector_p = row_space_projector(a, tol);
  fam.complement = identity(a.cols()) - fam.projector_p;
  if (kind == SolutionKind::Positive) {
    const Matrix& d = fam.reduced;
    const Matrix& q = fam.complement;
    const Matrix dp_pinv = pinv(d * fam.projector_p, tol);
    fam.x_zero = d + q * d.adjoint() + q * d.adjoint() * dp_pinv * d * q;
  }
  return fam;
}

/// X = D + (I - P) Y.
inline Matrix general_solution(const Matrix& a, const Matrix& c, const Matrix& y,
                               const ToleranceConfig& tol) {
  require_same_rows(a, c, "general_solution");
  detail::require_shape(y, a.cols(), c.cols(), "general_solution: Y");
  const Matrix d = reduced_solution(a, c, tol);
  const Matrix p = row_space_projector(a, tol);
  return d + (identity(a.cols()) - p) * y;
}

/// Y = X - D; general_solution(A, C, Y) reproduces X.
inline Matrix recover_parameter(const Matrix& a, const Matrix& c, const Matrix& x,
                                const ToleranceConfig& tol) {
  require_same_rows(a, c, "recover_parameter");
  detail::require_shape(x, a.cols(), c.cols(), "recover_parameter: X");
  const double residual = opnorm(a * x - c);
  if (!small_residual(residual, std::max(opnorm(c), opnorm(a) * opnorm(x)), tol)) {
    throw Error(ErrorKind::NotASolution, "AX differs from C", residual);
  }
  return x - reduced_solution(a, c, tol);
}

/// Range inclusion and Hermitian-ness of CA*.
inline SolvabilityReport hermitian_solvability(const Matrix& a, const Matrix& c,
                                               const ToleranceConfig& tol) {
  detail::require_square_target(a, c, "hermitian_solvability");
  SolvabilityReport r;
  r.certificate.range_residual = range_residual(a, c, tol);
  r.range_ok = small_residual(r.certificate.range_residual, opnorm(c), tol);
  const Matrix cas = c * a.adjoint();
  r.certificate.hermitian_defect = hermitian_defect(cas);
  r.ca_star_hermitian = small_residual(r.certificate.hermitian_defect, opnorm(cas), tol);
  if (!r.range_ok) {
    r.verdict = Verdict::Unsolvable;
    r.certificate.failed_condition = "range_inclusion";
  } else if (!r.ca_star_hermitian) {
    r.verdict = Verdict::SolvableGeneral;
    r.certificate.failed_condition = "ca_star_hermitian";
  } else {
    r.verdict = Verdict::SolvableHermitian;
  }
  return r;
}

/// X = D + (I - P) D* + (I - P) Y (I - P) for Hermitian Y.
inline Matrix hermitian_solution(const Matrix& a, const Matrix& c, const Matrix& y,
                                 const ToleranceConfig& tol) {
  const SolvabilityReport r = hermitian_solvability(a, c, tol);
  if (r.verdict != Verdict::SolvableHermitian) {
    throw Error(ErrorKind::NotSolvableHermitian,
                "condition failed: " + r.certificate.failed_condition,
                r.range_ok ? r.certificate.hermitian_defect : r.certificate.range_residual);
  }
  detail::require_shape(y, a.cols(), a.cols(), "hermitian_solution: Y");
  const double defect = hermitian_defect(y);
  if (!small_residual(defect, opnorm(y), tol)) {
    throw Error(ErrorKind::ParameterNotHermitian, "Y is not Hermitian", defect);
  }
  const Matrix d = reduced_solution(a, c, tol);
  const Matrix q = identity(a.cols()) - row_space_projector(a, tol);
  return d + q * d.adjoint() + q * y * q;
}

/// T_n = (I-P) D* [ (1/n) I + DP|_{H1} ]^{-1} D (I-P) evaluated on the
/// compression to H1 = R(P). The compressed DP is diagonalised once;
/// eigenvalues below rank_rtol * max are set to zero.
class TnSequence {
 public:
  TnSequence(const Matrix& a, const Matrix& c, const ToleranceConfig& tol) {
    detail::require_square_target(a, c, "tn_sequence");
    const Matrix d = reduced_solution(a, c, tol);
    const RangeBasis h1 = column_range(a.adjoint(), tol);
    const Matrix p = h1.basis * h1.basis.adjoint();
    if (!is_psd(d * p, tol)) {
      throw Error(ErrorKind::PreconditionFailed, "DP is not Hermitian PSD",
                  min_eigenvalue(d * p));
    }
    dim_ = a.cols();
    const Eigen::Index r = h1.rank();
    if (r == 0) {
      coupling_ = Matrix::Zero(0, dim_);
      spectrum_ = RealVector(0);
      return;
    }
    const Matrix compressed = h1.basis.adjoint() * d * h1.basis;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (compressed + compressed.adjoint()));
    spectrum_ = es.eigenvalues();
    const double top = std::max(spectrum_.cwiseAbs().maxCoeff(), opnorm(d));
    for (Eigen::Index i = 0; i < r; ++i) {
      if (spectrum_(i) <= tol.rank_rtol * top) spectrum_(i) = 0.0;
    }
    coupling_ = es.eigenvectors().adjoint() * h1.basis.adjoint() * d * (identity(dim_) - p);
  }

  Matrix at(std::uint64_t n) const {
    if (coupling_.rows() == 0) return Matrix::Zero(dim_, dim_);
    const double shift = 1.0 / static_cast<double>(n);
    const RealVector weights = (spectrum_.array() + shift).inverse().matrix();
    return coupling_.adjoint() * weights.cast<Complex>().asDiagonal() * coupling_;
  }

  double norm_at(std::uint64_t n) const { return opnorm(at(n)); }

 private:
  Eigen::Index dim_ = 0;
  RealVector spectrum_;
  Matrix coupling_;
};

struct TnEntry {
  std::uint64_t n = 0;
  double norm = 0.0;
};

/// Norms of T_n on the doubling schedule 1, 2, 4, ..., <= n_max.
inline std::vector<TnEntry> tn_sequence(const Matrix& a, const Matrix& c, std::uint64_t n_max,
                                        const ToleranceConfig& tol) {
  const TnSequence seq(a, c, tol);
  std::vector<TnEntry> out;
  for (std::uint64_t n = 1; n <= n_max && n != 0; n <<= 1) {
    out.push_back({n, seq.norm_at(n)});
    if (n > n_max / 2) break;
  }
  return out;
}

/// Converged when the last doubling moves |T_n| by < residual_atol (1 + value);
/// divergent when each of the last three doublings grows it by a factor
/// >= 1 + psd_atol. The decision is taken at the end of the schedule only.
inline LambdaEstimate lambda_diagnostic(const Matrix& a, const Matrix& c, std::uint64_t n_max,
                                        const ToleranceConfig& tol) {
  const std::vector<TnEntry> seq = tn_sequence(a, c, n_max, tol);
  LambdaEstimate est;
  est.horizon = seq.back().n;
  est.value = seq.back().norm;
  const std::size_t k = seq.size();
  if (k >= 2 && std::abs(seq[k - 1].norm - seq[k - 2].norm) <
                    tol.residual_atol * (1.0 + est.value)) {
    est.status = LambdaStatus::Converged;
    return est;
  }
  if (k >= 4) {
    bool growing = true;
    for (std::size_t i = k - 3; i < k; ++i) {
      growing = growing && seq[i].norm >= (1.0 + tol.psd_atol) * seq[i - 1].norm;
    }
    if (growing) est.status = LambdaStatus::Divergent;
  }
  return est;
}

/// Range inclusion, positivity of CA*, R(D) = R(DP), the least t with
/// CC* <= t CA*, and the T_n diagnostic. Verdict SolvablePositive iff
/// range_ok && ca_star_psd && dp_range_eq.
inline SolvabilityReport positive_solvability(const Matrix& a, const Matrix& c,
                                              const ToleranceConfig& tol,
                                              std::uint64_t n_max = kDefaultHorizon) {
  SolvabilityReport r = hermitian_solvability(a, c, tol);
  const Matrix cas = c * a.adjoint();
  r.certificate.ca_star_min_eigenvalue = min_eigenvalue(cas);
  r.ca_star_psd = r.ca_star_hermitian && is_psd(cas, tol);

  if (*r.ca_star_psd) {
    const MajorizationResult m = least_loewner_scale(c, cas, tol, opnorm(c) * opnorm(a));
    r.t_min = m.finite ? ExtendedReal::of(m.mu_star) : ExtendedReal::infinite();
  } else {
    r.t_min = ExtendedReal::infinite();
  }

  if (r.range_ok) {
    const Matrix d = reduced_solution(a, c, tol);
    const Matrix p = row_space_projector(a, tol);
    const detail::RangeEquality eq = detail::dp_range_equality(d, p, tol);
    r.dp_range_eq = eq.equal;
    r.certificate.dp_range_residual = eq.residual;
    if (is_psd(d * p, tol)) r.lambda_estimate = lambda_diagnostic(a, c, n_max, tol);
  }

  const bool positive = r.range_ok && *r.ca_star_psd && r.dp_range_eq.value_or(false);
  if (positive) {
    r.verdict = Verdict::SolvablePositive;
  } else if (r.verdict == Verdict::SolvableHermitian) {
    r.certificate.failed_condition = !*r.ca_star_psd ? "ca_star_psd" : "dp_range_eq";
  }
  r.criteria_agree = r.t_min->finite == positive;
  return r;
}

/// X = X0 + (I - P) Z (I - P) with
/// X0 = D + (I-P) D* + (I-P) D* (DP)^+ D (I-P) and Z PSD.
inline Matrix positive_solution(const Matrix& a, const Matrix& c, const Matrix& z,
                                const ToleranceConfig& tol) {
  const SolvabilityReport r = positive_solvability(a, c, tol, 1);
  if (r.verdict != Verdict::SolvablePositive) {
    throw Error(ErrorKind::NotSolvablePositive,
                "condition failed: " + r.certificate.failed_condition);
  }
  detail::require_shape(z, a.cols(), a.cols(), "positive_solution: Z");
  if (!is_psd(z, tol)) {
    throw Error(ErrorKind::ParameterNotPSD, "Z is not PSD", min_eigenvalue(z));
  }
  const SolutionFamily fam = solution_family(a, c, SolutionKind::Positive, tol);
  return *fam.x_zero + fam.complement * z * fam.complement;
}

/// Positivity of the Hermitian block matrix [[A11, A12], [A12*, A22]] via
/// A11 >= 0, A12 = A11 A11^+ A12 and A22 - A12* A11^+ A12 >= 0.
inline bool block_psd_test(const Matrix& a11, const Matrix& a12, const Matrix& a22,
                           const ToleranceConfig& tol) {
  require_square(a11, "block_psd_test: A11");
  require_square(a22, "block_psd_test: A22");
  if (a12.rows() != a11.rows() || a12.cols() != a22.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "block_psd_test: A12 must be A11.rows x A22.rows");
  }
  for (const Matrix* m : {&a11, &a22}) {
    const double defect = hermitian_defect(*m);
    if (!small_residual(defect, opnorm(*m), tol)) {
      throw Error(ErrorKind::NotHermitian, "block_psd_test: diagonal block not Hermitian",
                  defect);
    }
  }
  if (!is_psd(a11, tol)) return false;
  const Matrix a11_pinv = pinv(a11, tol);
  if (!small_residual(opnorm(a12 - a11 * a11_pinv * a12), opnorm(a12), tol)) return false;
  const Matrix schur = a22 - a12.adjoint() * a11_pinv * a12;
  return is_psd(0.5 * (schur + schur.adjoint()), tol);
}

/// [[A11, A12], [A12*, A22]]
inline Matrix assemble_blocks(const Matrix& a11, const Matrix& a12, const Matrix& a22) {
  Matrix m(a11.rows() + a22.rows(), a11.cols() + a22.cols());
  m << a11, a12, a12.adjoint(), a22;
  return m;
}

}  // namespace axc::douglas
