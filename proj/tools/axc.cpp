// axc: command-line front end for the AX = C toolkit.
//
// Exit codes: 0 success, 1 input error, 2 negative result (the JSON carries
// the certificate).

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "axc/douglas.hpp"
#include "axc/io.hpp"
#include "axc/oracle.hpp"
#include "axc/projpair.hpp"

namespace {

using axc::Matrix;
using axc::io::json;
namespace douglas = axc::douglas;
namespace projpair = axc::projpair;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNegative = 2;

struct Options {
  std::string a_path, c_path, y_path, z_path, out_path, csv_prefix;
  std::string mode = "general";
  std::size_t grid = 1000;
  double eps = 0.1;
  std::size_t trials = 500;
  std::uint64_t seed = axc::oracle::kDefaultSeed;
  int max_dim = 6;
  int min_dim = 1;
  std::string rank_policy = "random";
  axc::ToleranceConfig tol;
};

void emit(const Options& opt, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out_path);
  if (!out) throw axc::Error(axc::ErrorKind::Parse, "cannot write " + opt.out_path);
  out << text;
}

void write_csv(const std::string& path, const projpair::GridFunction& f) {
  std::ofstream out(path);
  if (!out) throw axc::Error(axc::ErrorKind::Parse, "cannot write " + path);
  axc::io::write_csv(out, f);
}

Matrix optional_matrix(const std::string& path, Eigen::Index n) {
  return path.empty() ? Matrix(Matrix::Zero(n, n)) : axc::io::load_matrix(path);
}

int cmd_solve(const Options& opt) {
  const Matrix a = axc::io::load_matrix(opt.a_path);
  const Matrix c = axc::io::load_matrix(opt.c_path);
  const douglas::SolvabilityReport report = douglas::positive_solvability(a, c, opt.tol);

  json out;
  out["mode"] = opt.mode;
  Matrix x;
  if (opt.mode == "general") {
    if (report.verdict == douglas::Verdict::Unsolvable) {
      emit(opt, axc::io::to_json(report));
      return kExitNegative;
    }
    axc::require_same_rows(a, c, "solve");
    const Matrix y = opt.y_path.empty() ? Matrix(Matrix::Zero(a.cols(), c.cols()))
                                        : axc::io::load_matrix(opt.y_path);
    x = douglas::general_solution(a, c, y, opt.tol);
  } else if (opt.mode == "hermitian") {
    if (report.verdict < douglas::Verdict::SolvableHermitian) {
      emit(opt, axc::io::to_json(report));
      return kExitNegative;
    }
    x = douglas::hermitian_solution(a, c, optional_matrix(opt.y_path, a.cols()), opt.tol);
  } else {
    if (report.verdict != douglas::Verdict::SolvablePositive) {
      emit(opt, axc::io::to_json(report));
      return kExitNegative;
    }
    const douglas::SolutionFamily fam =
        douglas::solution_family(a, c, douglas::SolutionKind::Positive, opt.tol);
    x = douglas::positive_solution(a, c, optional_matrix(opt.z_path, a.cols()), opt.tol);
    out["x_zero"] = axc::io::to_json(*fam.x_zero);
    // The free part is (I-P) Z (I-P): with P Z P in its place AX = C fails
    // for generic Z.
    out["free_part"] = "(I-P) Z (I-P)";
  }
  out["x"] = axc::io::to_json(x);
  out["residual"] = axc::opnorm(a * x - c);
  out["verdict"] = douglas::to_string(report.verdict);
  emit(opt, out);
  return kExitOk;
}

int cmd_check(const Options& opt) {
  const Matrix a = axc::io::load_matrix(opt.a_path);
  const Matrix c = axc::io::load_matrix(opt.c_path);
  emit(opt, axc::io::to_json(douglas::positive_solvability(a, c, opt.tol)));
  return kExitOk;
}

int cmd_majorize(const Options& opt) {
  const Matrix a = axc::io::load_matrix(opt.a_path);
  const Matrix c = axc::io::load_matrix(opt.c_path);
  const axc::MajorizationResult m = axc::min_majorization_scale(a, c, opt.tol);
  json out = axc::io::to_json(m);
  if (axc::range_inclusion(a, c, opt.tol)) {
    const double norm = axc::opnorm(douglas::reduced_solution(a, c, opt.tol));
    out["reduced_norm_squared"] = norm * norm;
  } else {
    out["reduced_norm_squared"] = nullptr;
  }
  emit(opt, out);
  return kExitOk;
}

int cmd_twoproj(const Options& opt) {
  const projpair::Grid grid(opt.grid);
  const projpair::NonexistenceCertificate cert = projpair::nonexistence_certificate(grid);
  const std::string csv = (opt.csv_prefix.empty() ? "twoproj" : opt.csv_prefix) + "_x.csv";
  write_csv(csv, projpair::pointwise_solution(grid));
  json out = axc::io::to_json(cert);
  out["limit_value"] = -1.0 / std::numbers::sqrt2;
  out["csv_x"] = csv;
  emit(opt, out);
  return kExitOk;
}

int cmd_perturb(const Options& opt) {
  const projpair::Grid grid(opt.grid);
  const projpair::Perturbation pert = projpair::perturb_q(grid, opt.eps);
  const projpair::GridFunction x = projpair::perturbed_solution(grid, opt.eps);
  const projpair::GridFunction q = projpair::canonical_pair(grid).second;
  const double residual = projpair::equation_residual(pert.q_prime, x, opt.tol);

  const std::string prefix = opt.csv_prefix.empty() ? "perturb" : opt.csv_prefix;
  write_csv(prefix + "_q.csv", pert.q_prime);
  write_csv(prefix + "_x.csv", x);

  json out;
  out["eps_requested"] = opt.eps;
  out["eps_snapped"] = pert.eps_snapped;
  out["distance"] = projpair::sup_distance(q, pert.q_prime);
  out["distance_bound"] = std::sin(std::numbers::pi * pert.eps_snapped / 2.0);
  out["residual_max"] = residual;
  out["membership"] = projpair::algebra_membership(x, opt.tol);
  out["max_jump"] = projpair::max_jump(x);
  out["csv_q"] = prefix + "_q.csv";
  out["csv_x"] = prefix + "_x.csv";
  emit(opt, out);
  return residual < 1e-8 ? kExitOk : kExitNegative;
}

int cmd_verify(const Options& opt) {
  axc::oracle::TrialSpec spec;
  spec.trials = opt.trials;
  spec.seed = opt.seed;
  spec.min_dim = opt.min_dim;
  spec.max_dim = opt.max_dim;
  if (opt.rank_policy == "full") spec.rank_policy = axc::oracle::RankPolicy::Full;
  else if (opt.rank_policy == "deficient") spec.rank_policy = axc::oracle::RankPolicy::Deficient;
  else spec.rank_policy = axc::oracle::RankPolicy::Random;
  const axc::oracle::PropertyReport report = axc::oracle::run_property_suite(spec, opt.tol);
  emit(opt, axc::io::to_json(report));
  return report.violations() == 0 ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvability and solution families of AX = C; two-projection counterexample"};
  app.require_subcommand(1);
  Options opt;

  app.add_option("--rank-rtol", opt.tol.rank_rtol, "relative singular-value cutoff")
      ->capture_default_str();
  app.add_option("--psd-atol", opt.tol.psd_atol, "eigenvalue floor, scaled by max(1, |M|)")
      ->capture_default_str();
  app.add_option("--residual-atol", opt.tol.residual_atol, "residual threshold")
      ->capture_default_str();
  app.add_option("--out", opt.out_path, "write JSON here instead of stdout");

  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("--a", opt.a_path, "matrix A (JSON)")->required();
    sub->add_option("--c", opt.c_path, "matrix C (JSON)")->required();
    sub->add_option("--out", opt.out_path, "write JSON here instead of stdout");
  };

  CLI::App* solve = app.add_subcommand("solve", "construct a solution of AX = C");
  add_pair(solve);
  solve->add_option("--mode", opt.mode, "general | hermitian | positive")
      ->check(CLI::IsMember({"general", "hermitian", "positive"}))
      ->capture_default_str();
  auto* y_opt = solve->add_option("--y", opt.y_path, "parameter Y (general/hermitian)");
  solve->add_option("--z", opt.z_path, "PSD parameter Z (positive)")->excludes(y_opt);

  CLI::App* check = app.add_subcommand("check", "full solvability report");
  add_pair(check);

  CLI::App* majorize = app.add_subcommand("majorize", "least mu with CC* <= mu AA*");
  add_pair(majorize);

  CLI::App* twoproj = app.add_subcommand("twoproj", "nonexistence certificate on the grid");
  twoproj->add_option("--n", opt.grid, "grid points (>= 100)")->capture_default_str();
  twoproj->add_option("--csv", opt.csv_prefix, "CSV file prefix (default: twoproj)");
  twoproj->add_option("--out", opt.out_path, "write JSON here instead of stdout");

  CLI::App* perturb = app.add_subcommand("perturb", "eps-perturbation restoring solvability");
  perturb->add_option("--n", opt.grid, "grid points")->capture_default_str();
  perturb->add_option("--eps", opt.eps, "perturbation size in (0, 1)")->required();
  perturb->add_option("--csv", opt.csv_prefix, "CSV file prefix (default: perturb)");
  perturb->add_option("--out", opt.out_path, "write JSON here instead of stdout");

  CLI::App* verify = app.add_subcommand("verify", "seeded property suite");
  verify->add_option("--trials", opt.trials, "number of trials")->capture_default_str();
  verify->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
  verify->add_option("--max-dim", opt.max_dim, "largest dimension (<= 8)")->capture_default_str();
  verify->add_option("--min-dim", opt.min_dim, "smallest dimension")->capture_default_str();
  verify->add_option("--rank-policy", opt.rank_policy, "full | deficient | random")
      ->check(CLI::IsMember({"full", "deficient", "random"}))
      ->capture_default_str();
  verify->add_option("--out", opt.out_path, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    opt.tol.validate();
    if (opt.min_dim > opt.max_dim) opt.min_dim = opt.max_dim;
    if (*solve) return cmd_solve(opt);
    if (*check) return cmd_check(opt);
    if (*majorize) return cmd_majorize(opt);
    if (*twoproj) return cmd_twoproj(opt);
    if (*perturb) return cmd_perturb(opt);
    if (*verify) return cmd_verify(opt);
  } catch (const axc::Error& e) {
    std::cerr << json{{"error", std::string(axc::to_string(e.kind()))}, {"message", e.what()}}.dump()
              << "\n";
    return kExitInput;
  }
  return kExitInput;
}
