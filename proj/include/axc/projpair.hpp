#pragma once

// Grid model of the C*-algebra of continuous 2x2 matrix functions on [0,1]
// whose values at t = 0 and t = 1 are diagonal. Holds the canonical
// projection pair P(t) = diag(1, 0), Q(t) = projection onto (c_t, s_t) with
// c_t = cos(pi t / 2), s_t = sin(pi t / 2).
//
// The equation (P + Q)^{1/2} X = P has the unique pointwise solution
// X(t) = (P + Q)^{-1/2} P for t > 0, whose (2,1) entry tends to -1/sqrt(2)
// as t -> 0 while membership requires 0 there. Reparametrising Q so that it
// equals P on [0, eps] removes the obstruction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "axc/matcore.hpp"

namespace axc::projpair {

using Mat2 = Eigen::Matrix2cd;

/// Uniform grid t_i = i / (n - 1) on [0, 1], n >= 3.
class Grid {
 public:
  explicit Grid(std::size_t n_points) : n_(n_points) {
    if (n_points < 3) throw Error(ErrorKind::BadGridSize, "grid needs at least 3 points");
  }

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(n_ - 1); }
  double t(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(n_ - 1);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
};

/// Values on nodes domain_start, ..., n - 1. Partial functions that are
/// undefined at t = 0 use domain_start = 1.
struct GridFunction {
  Grid grid{3};
  std::size_t domain_start = 0;
  std::vector<Mat2> values;

  bool defined_at(std::size_t node) const {
    return node >= domain_start && node < grid.size();
  }
  const Mat2& at(std::size_t node) const { return values.at(node - domain_start); }
};

struct NonexistenceCertificate {
  double boundary_value = 0.0;   // x21(0) required by membership
  double interior_limit = 0.0;   // x21 at the smallest positive node
  double gap = 0.0;
  std::size_t grid_resolution = 0;
  double candidate_residual = 0.0;  // max |(P+Q)^{1/2} X - P| over t > 0
};

struct Perturbation {
  GridFunction q_prime;
  std::size_t eps_index = 0;
  double eps_snapped = 0.0;
};

namespace detail {

// sqrt(1 + c_t) = sqrt(2) cos(pi t / 4), sqrt(1 - c_t) = sqrt(2) sin(pi t / 4);
// the half-angle forms avoid the cancellation in 1 - c_t near t = 0.
struct Angles {
  double c, s, root_plus, root_minus;
};

inline Angles angles(double t) {
  const double quarter = std::numbers::pi * t / 4.0;
  return {std::cos(2.0 * quarter), std::sin(2.0 * quarter),
          std::numbers::sqrt2 * std::cos(quarter), std::numbers::sqrt2 * std::sin(quarter)};
}

inline Mat2 p_value() {
  Mat2 p;
  p << 1.0, 0.0, 0.0, 0.0;
  return p;
}

inline Mat2 q_value(double t) {
  const Angles a = angles(t);
  Mat2 q;
  q << a.c * a.c, a.s * a.c, a.s * a.c, a.s * a.s;
  return q;
}

inline Mat2 sqrt_sum_value(double t) {
  const Angles a = angles(t);
  const double alpha = 0.5 * (2.0 - a.s) * (a.root_plus + a.root_minus);
  const double beta = 0.5 * a.s * (a.root_plus - a.root_minus);
  const double gamma = 0.5 * a.s * (a.root_plus + a.root_minus);
  Mat2 m;
  m << alpha, beta, beta, gamma;
  return m;
}

inline Mat2 inv_sqrt_sum_value(double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::SingularAtZero, "P + Q is singular at t = 0");
  const Angles a = angles(t);
  const Mat2 r = sqrt_sum_value(t);
  Mat2 m;
  m << r(1, 1), -r(0, 1), -r(1, 0), r(0, 0);
  return m / a.s;
}

inline Mat2 solution_value(double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::SingularAtZero, "X(t) is undefined at t = 0");
  const Angles a = angles(t);
  Mat2 x;
  x << 0.5 * (a.root_plus + a.root_minus), 0.0, 0.5 * (a.root_minus - a.root_plus), 0.0;
  return x;
}

template <typename F>
GridFunction tabulate(const Grid& grid, std::size_t start, F&& f) {
  GridFunction g{grid, start, {}};
  g.values.reserve(grid.size() - start);
  for (std::size_t i = start; i < grid.size(); ++i) g.values.push_back(f(i));
  return g;
}

}  // namespace detail

inline std::pair<GridFunction, GridFunction> canonical_pair(const Grid& grid) {
  return {detail::tabulate(grid, 0, [](std::size_t) { return detail::p_value(); }),
          detail::tabulate(grid, 0, [&](std::size_t i) { return detail::q_value(grid.t(i)); })};
}

/// t -> [[alpha, beta], [beta, gamma]] = (P(t) + Q(t))^{1/2}.
inline GridFunction sqrt_sum_closed_form(const Grid& grid) {
  return detail::tabulate(grid, 0,
                          [&](std::size_t i) { return detail::sqrt_sum_value(grid.t(i)); });
}

/// (P + Q)^{-1/2} = (1 / s_t) [[gamma, -beta], [-beta, alpha]] on t > 0.
inline GridFunction inv_sqrt_sum(const Grid& grid) {
  return detail::tabulate(grid, 1,
                          [&](std::size_t i) { return detail::inv_sqrt_sum_value(grid.t(i)); });
}

/// X(t) = (P + Q)^{-1/2} P on t > 0.
inline GridFunction pointwise_solution(const Grid& grid) {
  return detail::tabulate(grid, 1,
                          [&](std::size_t i) { return detail::solution_value(grid.t(i)); });
}

/// Pointwise max of |sqrt_psd(P + Q) X - P| over the nodes where X is defined.
inline double equation_residual(const GridFunction& q, const GridFunction& x,
                                const ToleranceConfig& tol = {}) {
  const Mat2 p = detail::p_value();
  double worst = 0.0;
  for (std::size_t i = x.domain_start; i < x.grid.size(); ++i) {
    const Matrix root = sqrt_psd(Matrix(p + q.at(i)), tol);
    worst = std::max(worst, opnorm(root * Matrix(x.at(i)) - Matrix(p)));
  }
  return worst;
}

/// Off-diagonal entries at t = 0 and t = 1 within residual_atol. A function
/// undefined at t = 0 is not a member.
inline bool algebra_membership(const GridFunction& f, const ToleranceConfig& tol = {}) {
  if (f.domain_start != 0) return false;
  for (const std::size_t node : {std::size_t{0}, f.grid.size() - 1}) {
    const Mat2& v = f.at(node);
    if (std::abs(v(0, 1)) > tol.residual_atol || std::abs(v(1, 0)) > tol.residual_atol) {
      return false;
    }
  }
  return true;
}

/// Defines a partial function at t = 0 by copying the value at the smallest
/// positive node.
inline GridFunction extend_by_limit(const GridFunction& f) {
  if (f.domain_start == 0) return f;
  GridFunction g = f;
  g.values.insert(g.values.begin(), f.domain_start, f.values.front());
  g.domain_start = 0;
  return g;
}

inline double sup_distance(const GridFunction& f, const GridFunction& g) {
  double worst = 0.0;
  const std::size_t start = std::max(f.domain_start, g.domain_start);
  for (std::size_t i = start; i < f.grid.size(); ++i) {
    worst = std::max(worst, opnorm(Matrix(f.at(i) - g.at(i))));
  }
  return worst;
}

/// Largest jump between adjacent nodes; the grid stand-in for continuity.
inline double max_jump(const GridFunction& f) {
  double worst = 0.0;
  for (std::size_t i = f.domain_start + 1; i < f.grid.size(); ++i) {
    worst = std::max(worst, opnorm(Matrix(f.at(i) - f.at(i - 1))));
  }
  return worst;
}

inline NonexistenceCertificate nonexistence_certificate(const Grid& grid) {
  if (grid.size() < 100) {
    throw Error(ErrorKind::BadGridSize, "nonexistence certificate needs at least 100 points");
  }
  const GridFunction x = pointwise_solution(grid);
  const GridFunction q = canonical_pair(grid).second;
  NonexistenceCertificate cert;
  cert.boundary_value = 0.0;
  cert.interior_limit = x.at(1)(1, 0).real();
  cert.gap = std::abs(cert.interior_limit - cert.boundary_value);
  cert.grid_resolution = grid.size();
  cert.candidate_residual = equation_residual(q, x);
  return cert;
}

namespace detail {

inline std::size_t snap_epsilon(const Grid& grid, double eps) {
  if (!std::isfinite(eps) || !(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorKind::BadEpsilon, "eps must lie strictly inside (0, 1)");
  }
  const double last = static_cast<double>(grid.size() - 1);
  const auto k = static_cast<std::size_t>(std::llround(eps * last));
  return std::clamp<std::size_t>(k, 1, grid.size() - 2);
}

// Parameter of the reparametrised function at node i > k: h^{-1}(t_i).
inline double pulled_back(const Grid& grid, std::size_t k, std::size_t i) {
  return static_cast<double>(i - k) / static_cast<double>(grid.size() - 1 - k);
}

}  // namespace detail

/// Q'(t) = Q(0) on [0, eps] and Q(h^{-1} t) on [eps, 1], h the linear map
/// [0, 1] -> [eps, 1]. eps snaps to the nearest interior grid node.
inline Perturbation perturb_q(const Grid& grid, double eps) {
  const std::size_t k = detail::snap_epsilon(grid, eps);
  Perturbation out;
  out.eps_index = k;
  out.eps_snapped = grid.t(k);
  out.q_prime = detail::tabulate(grid, 0, [&](std::size_t i) {
    return i <= k ? detail::q_value(0.0) : detail::q_value(detail::pulled_back(grid, k, i));
  });
  return out;
}

/// Solution of (P + Q')^{1/2} X = P in the algebra: [[1/sqrt2, 0],
/// [-t / (eps sqrt2), 0]] on [0, eps] and X(h^{-1} t) beyond.
inline GridFunction perturbed_solution(const Grid& grid, double eps) {
  const std::size_t k = detail::snap_epsilon(grid, eps);
  return detail::tabulate(grid, 0, [&](std::size_t i) {
    if (i > k) return detail::solution_value(detail::pulled_back(grid, k, i));
    const double ratio = static_cast<double>(i) / static_cast<double>(k);
    Mat2 x;
    x << 1.0 / std::numbers::sqrt2, 0.0, -ratio / std::numbers::sqrt2, 0.0;
    return x;
  });
}

}  // namespace axc::projpair
