#pragma once

// Brute-force verifiers. The checks do not go through Eigen's
// decompositions or the matcore/douglas decision logic: eigenproblems use
// the cyclic Jacobi routine below and comparisons use Frobenius norms.
// (The random-instance generators do use Eigen's QR/SVD; they only build
// inputs.)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "axc/douglas.hpp"

namespace axc::oracle {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2024;

/// SplitMix64 finaliser of (seed, index); each trial owns its generator.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};

/// Cyclic Jacobi rotations on the Hermitian part of `m`.
inline HermitianEigen jacobi_eigen(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Matrix a = 0.5 * (m + m.adjoint());
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.squaredNorm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off <= 1e-32 * scale || off == 0.0) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r < 1e-300) continue;
        const Complex phase = std::conj(a(p, q) / r);
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, phase) * [[c, s], [-s, c]] acting on coordinates (p, q)
        const Complex g00 = c, g01 = s, g10 = -s * phase, g11 = c * phase;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * g00 + akq * g10;
          a(k, q) = akp * g01 + akq * g11;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
          a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * g00 + vkq * g10;
          v(k, q) = vkp * g01 + vkq * g11;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  // ascending order
  HermitianEigen out{RealVector(n), Matrix(n, n)};
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() < a(y, y).real();
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = order[static_cast<std::size_t>(i)];
    out.values(i) = a(j, j).real();
    out.vectors.col(i) = v.col(j);
  }
  return out;
}

inline double min_eig(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return jacobi_eigen(m).values(0);
}

inline double max_abs_eig(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const RealVector ev = jacobi_eigen(m).values;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

/// Projector onto the row space of `m` from the eigenvectors of m* m.
inline Matrix row_projector(const Matrix& m) {
  const Eigen::Index n = m.cols();
  Matrix proj = Matrix::Zero(n, n);
  if (m.size() == 0) return proj;
  const HermitianEigen e = jacobi_eigen(m.adjoint() * m);
  const double top = e.values(n - 1);
  if (!(top > 0.0)) return proj;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (e.values(i) > 1e-12 * top) proj += e.vectors.col(i) * e.vectors.col(i).adjoint();
  }
  return proj;
}

inline bool oracle_psd(const Matrix& m) {
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > 1e-9 * scale) return false;
  return min_eig(m) >= -1e-9 * std::max(1.0, max_abs_eig(m));
}

struct LsqResult {
  Matrix solution;
  double residual = 0.0;  // Frobenius norm of A X - C
};

/// Minimum-norm least-squares solution from the normal equations
/// A*A X = A*C, inverted on the eigenvectors of A*A with nonzero eigenvalues.
inline LsqResult lsq_solve(const Matrix& a, const Matrix& c) {
  require_same_rows(a, c, "lsq_solve");
  const Eigen::Index n = a.cols();
  Matrix x = Matrix::Zero(n, c.cols());
  if (a.size() > 0) {
    const HermitianEigen e = jacobi_eigen(a.adjoint() * a);
    const double top = e.values(n - 1);
    const Matrix rhs = a.adjoint() * c;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (top > 0.0 && e.values(i) > 1e-12 * top) {
        x += e.vectors.col(i) * ((e.vectors.col(i).adjoint() * rhs) / e.values(i));
      }
    }
  }
  return {x, (a * x - c).norm()};
}

inline Matrix random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

/// Probes Re<Mx, x> on random complex vectors. A `false` answer is a
/// certificate (a vector with negative quadratic form); `true` is only
/// evidence.
inline bool psd_quadratic_probe(const Matrix& m, std::size_t probes, std::uint64_t seed) {
  require_square(m, "psd_quadratic_probe");
  const double defect = (m - m.adjoint()).norm();
  if (defect > 1e-9 * std::max(1.0, m.norm())) {
    throw Error(ErrorKind::NotHermitian, "probe input is not Hermitian", defect);
  }
  Rng rng(seed);
  const double floor = -1e-12 * std::max(1.0, m.norm());
  for (std::size_t k = 0; k < probes; ++k) {
    const Matrix x = random_gaussian(rng, m.rows(), 1);
    const double form = (x.adjoint() * m * x)(0, 0).real() / x.squaredNorm();
    if (form < floor) return false;
  }
  return true;
}

/// Randomised search over the Hermitian family D + (I-P) D* + (I-P) Y (I-P)
/// with Y = G*G. Returns the first PSD member found; an empty result is not a
/// proof of unsolvability.
inline std::optional<Matrix> positive_search(const Matrix& a, const Matrix& c,
                                             std::size_t budget, std::uint64_t seed) {
  const Eigen::Index n = a.cols();
  const Matrix d = lsq_solve(a, c).solution;
  const Matrix q = Matrix::Identity(n, n) - row_projector(a);
  const Matrix base = d + q * d.adjoint();
  const double target = std::max(1.0, c.norm());
  Rng rng(seed);
  std::uniform_real_distribution<double> exponent(-1.0, 2.0);
  for (std::size_t k = 0; k < budget; ++k) {
    Matrix y = Matrix::Zero(n, n);
    if (k > 0) {
      const Matrix g = random_gaussian(rng, n, n);
      y = std::pow(10.0, exponent(rng)) * (g.adjoint() * g);
    }
    const Matrix x = base + q * y * q;
    if ((a * x - c).norm() <= 1e-8 * target && oracle_psd(x)) return x;
  }
  return std::nullopt;
}

struct DouglasProperties {
  double norm_squared = 0.0;  // |D|^2
  double mu_star = 0.0;
  bool norm_identity = false;
  double kernel_residual = 0.0;  // max of |D (I - Pi_C*)|, |C (I - Pi_D*)|
  bool kernel_equal = false;
  double row_space_residual = 0.0;  // |(I - Pi_A*) D|
  double pinv_residual = 0.0;       // |(I - A^+ A) D|
  bool range_in_row_space = false;

  bool all() const { return norm_identity && kernel_equal && range_in_row_space; }
};

inline bool close_relative(double x, double y, double rtol) {
  return std::abs(x - y) <= rtol * std::max(std::abs(x), std::abs(y)) + 1e-14;
}

/// Checks |D|^2 = mu*, N(C) = N(D) and R(D) inside R(A*) for the reduced
/// solution D = reduced_solution(A, C).
inline DouglasProperties douglas_properties_check(const Matrix& a, const Matrix& c,
                                                  const ToleranceConfig& tol = {}) {
  const Matrix d = douglas::reduced_solution(a, c, tol);
  const Eigen::Index n = a.cols();
  DouglasProperties out;
  out.norm_squared = d.size() == 0 ? 0.0 : std::max(0.0, jacobi_eigen(d.adjoint() * d).values(d.cols() - 1));
  const MajorizationResult mu = min_majorization_scale(a, c, tol);
  out.mu_star = mu.mu_star;
  out.norm_identity = mu.finite && close_relative(out.norm_squared, mu.mu_star, 1e-8);

  const Matrix id_c = Matrix::Identity(c.cols(), c.cols());
  const double r1 = (d * (id_c - row_projector(c))).norm();
  const double r2 = (c * (id_c - row_projector(d))).norm();
  out.kernel_residual = std::max(r1, r2);
  out.kernel_equal = r1 <= 1e-8 * std::max(1.0, d.norm()) && r2 <= 1e-8 * std::max(1.0, c.norm());

  const Matrix id_n = Matrix::Identity(n, n);
  out.row_space_residual = ((id_n - row_projector(a)) * d).norm();
  out.pinv_residual = ((id_n - pinv(a, tol) * a) * d).norm();
  out.range_in_row_space = out.row_space_residual <= 1e-8 * std::max(1.0, d.norm()) &&
                           out.pinv_residual < 1e-10 * std::max(1.0, d.norm());
  return out;
}

// ---------------------------------------------------------------------------
// Random instances

enum class RankPolicy { Full, Deficient, Random };

inline std::string_view to_string(RankPolicy p) {
  switch (p) {
    case RankPolicy::Full: return "full";
    case RankPolicy::Deficient: return "deficient";
    case RankPolicy::Random: return "random";
  }
  return "random";
}

struct TrialSpec {
  int min_dim = 1;
  int max_dim = 6;
  RankPolicy rank_policy = RankPolicy::Random;
  std::size_t trials = 500;
  std::uint64_t seed = kDefaultSeed;

  void validate() const {
    if (trials < 1) throw Error(ErrorKind::Parse, "trials must be >= 1");
    if (min_dim < 1 || max_dim < min_dim || max_dim > 8) {
      throw Error(ErrorKind::Parse, "dimensions must satisfy 1 <= min_dim <= max_dim <= 8");
    }
  }
};

/// Haar unitary from the QR factorisation of a complex Gaussian matrix.
inline Matrix random_unitary(Rng& rng, Eigen::Index n) {
  const Matrix g = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

/// Rank-r matrix with nonzero singular values drawn from [0.5, 2].
inline Matrix random_rank(Rng& rng, Eigen::Index rows, Eigen::Index cols, Eigen::Index rank) {
  std::uniform_real_distribution<double> sv(0.5, 2.0);
  const Matrix u = random_unitary(rng, rows);
  const Matrix v = random_unitary(rng, cols);
  Matrix m = Matrix::Zero(rows, cols);
  for (Eigen::Index i = 0; i < rank; ++i) m += sv(rng) * u.col(i) * v.col(i).adjoint();
  return m;
}

/// U diag(values) U* for a random unitary U.
inline Matrix random_hermitian(Rng& rng, const RealVector& values) {
  const Matrix u = random_unitary(rng, values.size());
  return u * values.cast<Complex>().asDiagonal() * u.adjoint();
}

inline Matrix random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  std::uniform_real_distribution<double> ev(0.5, 2.0);
  RealVector values = RealVector::Zero(n);
  for (Eigen::Index i = 0; i < rank; ++i) values(i) = ev(rng);
  return random_hermitian(rng, values);
}

/// Hermitian with at least one eigenvalue in [-2, -0.5] and, for n > 1, at
/// least one in [0.5, 2].
inline Matrix random_indefinite(Rng& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution sign(0.5);
  RealVector values(n);
  for (Eigen::Index i = 0; i < n; ++i) values(i) = (sign(rng) ? 1.0 : -1.0) * mag(rng);
  values(0) = -mag(rng);
  if (n > 1) values(1) = mag(rng);
  return random_hermitian(rng, values);
}

enum class InstanceKind {
  Positive,           // C = A X0, X0 PSD
  RangeDeficient,     // C = A X, X Hermitian with R(D) != R(DP), CA* PSD
  HermitianIndefinite,
  General,            // C = A W, W arbitrary
  Inconsistent,       // C arbitrary
};

inline constexpr int kInstanceKinds = 5;

inline std::string_view to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::Positive: return "positive";
    case InstanceKind::RangeDeficient: return "range_deficient";
    case InstanceKind::HermitianIndefinite: return "hermitian_indefinite";
    case InstanceKind::General: return "general";
    case InstanceKind::Inconsistent: return "inconsistent";
  }
  return "general";
}

struct Instance {
  InstanceKind kind = InstanceKind::General;
  Matrix a;
  Matrix c;
  std::optional<Matrix> witness;  // some X with AX = C, when consistent
};

inline Eigen::Index draw_rank(Rng& rng, Eigen::Index n, RankPolicy policy) {
  switch (policy) {
    case RankPolicy::Full: return n;
    case RankPolicy::Deficient:
      return std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
    case RankPolicy::Random: break;
  }
  return std::uniform_int_distribution<Eigen::Index>(0, n)(rng);
}

inline Instance random_instance(Rng& rng, Eigen::Index n, RankPolicy policy, InstanceKind kind) {
  Instance inst;
  inst.kind = kind;
  Eigen::Index r = draw_rank(rng, n, policy);
  // Both kinds need a proper subspace R(A*); fall back when the rank policy
  // cannot provide one.
  if (kind == InstanceKind::RangeDeficient && (r == 0 || r == n)) {
    if (n >= 2 && policy != RankPolicy::Full) {
      r = std::uniform_int_distribution<Eigen::Index>(1, n - 1)(rng);
    } else {
      inst.kind = InstanceKind::HermitianIndefinite;
    }
  }
  if (kind == InstanceKind::Inconsistent && r == n) {
    if (policy != RankPolicy::Full) {
      r = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
    } else {
      inst.kind = InstanceKind::General;
    }
  }
  inst.a = random_rank(rng, n, n, r);
  switch (inst.kind) {
    case InstanceKind::Positive: {
      const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(0, n)(rng);
      inst.witness = random_psd(rng, n, k);
      break;
    }
    case InstanceKind::RangeDeficient: {
      // Build X in the basis (R(A*), N(A)) with a rank-deficient PSD corner on
      // R(A*) and a generic off-diagonal block.
      Eigen::JacobiSVD<Matrix> svd(inst.a, Eigen::ComputeFullV);
      const Matrix v = svd.matrixV().leftCols(r);
      const Matrix w = svd.matrixV().rightCols(n - r);
      const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(0, r - 1)(rng);
      const Matrix corner = random_psd(rng, r, k);
      const Matrix off = random_gaussian(rng, r, n - r);
      const Matrix tail = random_indefinite(rng, n - r);
      inst.witness = v * corner * v.adjoint() + v * off * w.adjoint() +
                     w * off.adjoint() * v.adjoint() + w * tail * w.adjoint();
      break;
    }
    case InstanceKind::HermitianIndefinite:
      inst.witness = random_indefinite(rng, n);
      break;
    case InstanceKind::General:
      inst.witness = random_gaussian(rng, n, n);
      break;
    case InstanceKind::Inconsistent:
      break;
  }
  inst.c = inst.witness ? Matrix(inst.a * *inst.witness) : random_gaussian(rng, n, n);
  return inst;
}

// ---------------------------------------------------------------------------
// Property suite

struct PropertyCount {
  std::string name;
  std::size_t checked = 0;
  std::size_t passed = 0;
};

struct Counterexample {
  std::string property;
  std::size_t trial = 0;
  std::string detail;
  Matrix a;
  Matrix c;
};

struct PropertyReport {
  TrialSpec spec;
  std::vector<PropertyCount> properties;
  std::optional<Counterexample> first_failure;

  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& p : properties) v += p.checked - p.passed;
    return v;
  }
};

namespace detail {

class Tally {
 public:
  explicit Tally(PropertyReport& report) : report_(report) {}

  void record(const std::string& name, bool ok, std::size_t trial, const Matrix& a,
              const Matrix& c, const std::string& detail = {}) {
    PropertyCount* slot = nullptr;
    for (auto& p : report_.properties) {
      if (p.name == name) slot = &p;
    }
    if (slot == nullptr) {
      report_.properties.push_back({name, 0, 0});
      slot = &report_.properties.back();
    }
    ++slot->checked;
    if (ok) {
      ++slot->passed;
    } else if (!report_.first_failure) {
      report_.first_failure = Counterexample{name, trial, detail, a, c};
    }
  }

 private:
  PropertyReport& report_;
};

inline double rel_scale(const Matrix& m) { return std::max(1.0, m.norm()); }

inline void check_equation_instance(Tally& tally, std::size_t trial, Rng& rng,
                                    const Instance& inst, const ToleranceConfig& tol) {
  using namespace douglas;
  const Matrix& a = inst.a;
  const Matrix& c = inst.c;
  const Eigen::Index n = a.cols();
  const bool consistent = inst.witness.has_value();

  // Oracle agreement on the reduced solution.
  const LsqResult lsq = lsq_solve(a, c);
  if (consistent) {
    const Matrix d = reduced_solution(a, c, tol);
    tally.record("oracle_lsq_agreement", (lsq.solution - d).norm() <= 1e-8 * rel_scale(d), trial,
                 a, c);
  }

  // Completeness of X = D + (I - P) Y.
  if (consistent) {
    const Matrix& x = *inst.witness;
    const Matrix y = recover_parameter(a, c, x, tol);
    const Matrix back = general_solution(a, c, y, tol);
    const Matrix y_rand = random_gaussian(rng, n, n);
    const Matrix x_rand = general_solution(a, c, y_rand, tol);
    const bool ok = (back - x).norm() <= 1e-9 * rel_scale(x) &&
                    (a * x_rand - c).norm() <= 1e-9 * rel_scale(c) * rel_scale(x_rand);
    tally.record("parametrization_completeness", ok, trial, a, c);
  }

  // Douglas properties and the norm identity.
  if (consistent) {
    const DouglasProperties props = douglas_properties_check(a, c, tol);
    tally.record("douglas_properties", props.all(), trial, a, c,
                 "kernel_residual=" + std::to_string(props.kernel_residual) +
                     " row_space_residual=" + std::to_string(props.row_space_residual));
    tally.record("norm_identity", props.norm_identity, trial, a, c,
                 "norm_squared=" + std::to_string(props.norm_squared) +
                     " mu_star=" + std::to_string(props.mu_star));
  }

  // Hermitian criterion.
  const SolvabilityReport herm = hermitian_solvability(a, c, tol);
  const bool built_hermitian = inst.kind == InstanceKind::Positive ||
                               inst.kind == InstanceKind::RangeDeficient ||
                               inst.kind == InstanceKind::HermitianIndefinite;
  bool herm_ok = herm.range_ok == consistent;
  if (built_hermitian) herm_ok = herm_ok && herm.verdict == Verdict::SolvableHermitian;
  if (herm.verdict == Verdict::SolvableHermitian) {
    const Matrix g = random_gaussian(rng, n, n);
    const Matrix x = hermitian_solution(a, c, g + g.adjoint(), tol);
    herm_ok = herm_ok && (x - x.adjoint()).norm() <= 1e-9 * rel_scale(x) &&
              (a * x - c).norm() <= 1e-9 * rel_scale(c) * rel_scale(x);
  }
  if (consistent) {
    // DP Hermitian <=> CA* Hermitian; DP PSD <=> CA* PSD, through oracle D and P.
    const Matrix dp = lsq.solution * row_projector(a);
    const Matrix cas = c * a.adjoint();
    const bool dp_herm = (dp - dp.adjoint()).norm() <= 1e-8 * rel_scale(dp);
    const bool cas_herm = (cas - cas.adjoint()).norm() <= 1e-8 * rel_scale(cas);
    herm_ok = herm_ok && dp_herm == cas_herm && cas_herm == herm.ca_star_hermitian;
    if (dp_herm && cas_herm) herm_ok = herm_ok && oracle_psd(dp) == oracle_psd(cas);
  }
  tally.record("hermitian_criterion", herm_ok, trial, a, c);

  // Positive solvability: t_min route vs range-equality route.
  const SolvabilityReport pos = positive_solvability(a, c, tol);
  bool pos_ok = pos.criteria_agree.value_or(false);
  if (inst.kind == InstanceKind::Positive) pos_ok = pos_ok && pos.verdict == Verdict::SolvablePositive;
  if (inst.kind == InstanceKind::RangeDeficient) {
    pos_ok = pos_ok && pos.verdict == Verdict::SolvableHermitian && pos.dp_range_eq == false &&
             pos.ca_star_psd == true;
  }
  const std::optional<Matrix> found = positive_search(a, c, 20, rng());
  if (found) pos_ok = pos_ok && pos.verdict == Verdict::SolvablePositive;
  tally.record("positive_criteria_agreement", pos_ok, trial, a, c,
               "kind=" + std::string(to_string(inst.kind)) +
                   " verdict=" + std::string(douglas::to_string(pos.verdict)) +
                   " agree=" + std::to_string(pos.criteria_agree.value_or(false)) +
                   " search=" + std::to_string(found.has_value()));

  if (pos.verdict == Verdict::SolvablePositive) {
    const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(0, n)(rng);
    const Matrix z = random_psd(rng, n, k);
    const Matrix x = positive_solution(a, c, z, tol);
    const bool ok = oracle_psd(x) && (a * x - c).norm() <= 1e-9 * rel_scale(c) * rel_scale(x) &&
                    pos.t_min->finite && pos.t_min->value <= opnorm(x) + 1e-8;
    tally.record("positive_family", ok, trial, a, c);
  }

  // T_n monotonicity and lambda vs R(D) = R(DP).
  if (pos.lambda_estimate) {
    const TnSequence seq(a, c, tol);
    bool mono = true;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << 40); m <<= 1) {
      mono = mono && is_psd(seq.at(2 * m) - seq.at(m), tol);
    }
    tally.record("tn_monotonicity", mono, trial, a, c);
    const LambdaStatus expected =
        pos.dp_range_eq.value_or(false) ? LambdaStatus::Converged : LambdaStatus::Divergent;
    tally.record("lambda_matches_range_equality", pos.lambda_estimate->status == expected, trial,
                 a, c, "lambda=" + std::to_string(pos.lambda_estimate->value));
  }
}

inline void check_block_instance(Tally& tally, std::size_t trial, Rng& rng, int max_block,
                                 const ToleranceConfig& tol) {
  std::uniform_int_distribution<Eigen::Index> dim(1, max_block);
  const Eigen::Index p = dim(rng), q = dim(rng);
  const Eigen::Index n = p + q;
  Matrix m;
  if (std::bernoulli_distribution(0.5)(rng)) {
    m = random_psd(rng, n, std::uniform_int_distribution<Eigen::Index>(0, n)(rng));
  } else {
    m = random_indefinite(rng, n);
  }
  m = 0.5 * (m + m.adjoint());
  const Matrix a11 = m.topLeftCorner(p, p);
  const Matrix a12 = m.topRightCorner(p, q);
  const Matrix a22 = m.bottomRightCorner(q, q);
  const bool block = douglas::block_psd_test(a11, a12, a22, tol);
  const bool ok = block == is_psd(m, tol) && block == oracle_psd(m);
  tally.record("block_psd_equivalence", ok, trial, m, Matrix(0, 0));
}

}  // namespace detail

/// Runs every property on `spec.trials` seeded instances. Trial i draws all
/// of its randomness from sub_seed(spec.seed, i).
inline PropertyReport run_property_suite(const TrialSpec& spec, const ToleranceConfig& tol = {}) {
  spec.validate();
  PropertyReport report;
  report.spec = spec;
  detail::Tally tally(report);
  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    Rng rng(sub_seed(spec.seed, trial));
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(spec.min_dim, spec.max_dim)(rng);
    const auto kind = static_cast<InstanceKind>(trial % kInstanceKinds);
    const Instance inst = random_instance(rng, n, spec.rank_policy, kind);
    try {
      detail::check_equation_instance(tally, trial, rng, inst, tol);
      detail::check_block_instance(tally, trial, rng, std::min(spec.max_dim, 4), tol);
      tally.record("no_exceptions", true, trial, inst.a, inst.c);
    } catch (const Error& e) {
      tally.record("no_exceptions", false, trial, inst.a, inst.c, e.what());
    }
  }
  return report;
}

}  // namespace axc::oracle
