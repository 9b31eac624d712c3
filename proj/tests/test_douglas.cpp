#include <gtest/gtest.h>

#include "axc/douglas.hpp"
#include "axc/oracle.hpp"
#include "fixtures.hpp"

using namespace axc;
using namespace axc::douglas;
using fixtures::diag;
using fixtures::mat;
using fixtures::max_abs;

namespace {

const ToleranceConfig kTol{};

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Parse;
}

}  // namespace

TEST(ReducedSolution, ExamplePairIsNotHermitian) {
  const Matrix d = reduced_solution(fixtures::ex_a(), fixtures::ex_c(), kTol);
  EXPECT_LT(max_abs(d - mat({{2, 1}, {0, 0}})), 1e-12);
  EXPECT_GT(hermitian_defect(d), 0.5);
}

TEST(ReducedSolution, InvertibleIsInverse) {
  oracle::Rng rng(21);
  const Matrix a = oracle::random_rank(rng, 4, 4, 4);
  const Matrix c = oracle::random_gaussian(rng, 4, 4);
  EXPECT_LT(opnorm(reduced_solution(a, c, kTol) - a.inverse() * c), 1e-10);
}

TEST(ReducedSolution, ThreeByThreePairIsC) {
  EXPECT_LT(max_abs(reduced_solution(fixtures::rk_a(), fixtures::rk_c(), kTol) - fixtures::rk_c()),
            1e-15);
}

TEST(ReducedSolution, MatchesLeastSquaresOracle) {
  oracle::Rng rng(22);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
    const Matrix a = oracle::random_rank(rng, n, n, std::uniform_int_distribution<Eigen::Index>(0, n)(rng));
    const Matrix c = a * oracle::random_gaussian(rng, n, n);
    EXPECT_LT(opnorm(reduced_solution(a, c, kTol) - oracle::lsq_solve(a, c).solution), 1e-8);
  }
}

TEST(ReducedSolution, InconsistentThrowsWithResidual) {
  try {
    reduced_solution(fixtures::dj_a(), fixtures::dj_c(), kTol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSolvable);
    ASSERT_TRUE(e.certificate());
    EXPECT_NEAR(*e.certificate(), 1.0, 1e-12);
  }
}

TEST(GeneralSolution, ZeroParameterGivesReduced) {
  const Matrix x = general_solution(fixtures::ex_a(), fixtures::ex_c(), Matrix::Zero(2, 2), kTol);
  EXPECT_LT(max_abs(x - mat({{2, 1}, {0, 0}})), 1e-12);
}

TEST(GeneralSolution, ExampleParameter) {
  const Matrix x =
      general_solution(fixtures::ex_a(), fixtures::ex_c(), mat({{9, 9}, {1, 1}}), kTol);
  EXPECT_LT(max_abs(x - mat({{2, 1}, {1, 1}})), 1e-12);
  EXPECT_LT(max_abs(fixtures::ex_a() * x - fixtures::ex_c()), 1e-12);
}

TEST(GeneralSolution, ShapeMismatch) {
  EXPECT_EQ(kind_of([] { general_solution(fixtures::ex_a(), fixtures::ex_c(), Matrix::Zero(3, 2), kTol); }),
            ErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([] { general_solution(fixtures::ex_a(), Matrix::Zero(3, 2), Matrix::Zero(2, 2), kTol); }),
            ErrorKind::ShapeMismatch);
}

TEST(RecoverParameter, Examples) {
  const Matrix a = fixtures::ex_a(), c = fixtures::ex_c();
  EXPECT_LT(max_abs(recover_parameter(a, c, mat({{2, 1}, {0, 0}}), kTol)), 1e-12);
  const Matrix y = recover_parameter(a, c, mat({{2, 1}, {1, 1}}), kTol);
  EXPECT_LT(max_abs(y - mat({{0, 0}, {1, 1}})), 1e-12);
  EXPECT_LT(max_abs(general_solution(a, c, y, kTol) - mat({{2, 1}, {1, 1}})), 1e-12);
}

TEST(RecoverParameter, RejectsNonSolution) {
  EXPECT_EQ(kind_of([] { recover_parameter(fixtures::ex_a(), fixtures::ex_c(), identity(2), kTol); }),
            ErrorKind::NotASolution);
}

TEST(RecoverParameter, RandomRoundTrip) {
  oracle::Rng rng(23);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
    const Matrix a = oracle::random_rank(rng, n, n, std::uniform_int_distribution<Eigen::Index>(0, n)(rng));
    const Matrix c = a * oracle::random_gaussian(rng, n, n);
    const Matrix x = general_solution(a, c, oracle::random_gaussian(rng, n, n), kTol);
    EXPECT_LT(opnorm(a * x - c), 1e-9 * std::max(1.0, opnorm(a) * opnorm(x)));
    const Matrix y = recover_parameter(a, c, x, kTol);
    EXPECT_LT(opnorm(general_solution(a, c, y, kTol) - x), 1e-9 * std::max(1.0, opnorm(x)));
  }
}

TEST(HermitianSolvability, ExamplePair) {
  const Matrix a = fixtures::ex_a(), c = fixtures::ex_c();
  EXPECT_LT(max_abs(c * a.adjoint() - diag({2, 0})), 1e-15);
  const SolvabilityReport r = hermitian_solvability(a, c, kTol);
  EXPECT_TRUE(r.range_ok);
  EXPECT_TRUE(r.ca_star_hermitian);
  EXPECT_EQ(r.verdict, Verdict::SolvableHermitian);
}

TEST(HermitianSolvability, ThreeByThreePair) {
  EXPECT_EQ(positive_solvability(fixtures::rk_a(), fixtures::rk_c(), kTol).verdict,
            Verdict::SolvableHermitian);
}

TEST(HermitianSolvability, NonHermitianProduct) {
  const Matrix c = mat({{0, 1}, {0, 0}});  // A = I, so CA* = C
  const SolvabilityReport r = hermitian_solvability(identity(2), c, kTol);
  EXPECT_TRUE(r.range_ok);
  EXPECT_FALSE(r.ca_star_hermitian);
  EXPECT_EQ(r.verdict, Verdict::SolvableGeneral);
  EXPECT_EQ(r.certificate.failed_condition, "ca_star_hermitian");
}

TEST(HermitianSolvability, DisjointIsUnsolvable) {
  const SolvabilityReport r = hermitian_solvability(fixtures::dj_a(), fixtures::dj_c(), kTol);
  EXPECT_FALSE(r.range_ok);
  EXPECT_EQ(r.verdict, Verdict::Unsolvable);
}

TEST(HermitianSolution, ExamplePair) {
  const Matrix x = hermitian_solution(fixtures::ex_a(), fixtures::ex_c(), Matrix::Zero(2, 2), kTol);
  EXPECT_LT(max_abs(x - mat({{2, 1}, {1, 0}})), 1e-12);
}

TEST(HermitianSolution, ThreeByThreeForm) {
  for (double x33 : {-3.0, 0.0, 0.25, 7.0}) {
    Matrix y = Matrix::Zero(3, 3);
    y(2, 2) = x33;
    const Matrix x = hermitian_solution(fixtures::rk_a(), fixtures::rk_c(), y, kTol);
    EXPECT_LT(max_abs(x - mat({{1, 0, 0}, {0, 0, 1}, {0, 1, x33}})), 1e-12);
    EXPECT_FALSE(is_psd(x, kTol));
  }
}

TEST(HermitianSolution, Errors) {
  EXPECT_EQ(kind_of([] { hermitian_solution(identity(2), mat({{0, 1}, {0, 0}}), Matrix::Zero(2, 2), kTol); }),
            ErrorKind::NotSolvableHermitian);
  EXPECT_EQ(kind_of([] { hermitian_solution(fixtures::ex_a(), fixtures::ex_c(), mat({{0, 1}, {0, 0}}), kTol); }),
            ErrorKind::ParameterNotHermitian);
}

TEST(PositiveSolvability, ExamplePair) {
  const SolvabilityReport r = positive_solvability(fixtures::ex_a(), fixtures::ex_c(), kTol);
  ASSERT_TRUE(r.t_min && r.t_min->finite);
  // CC* = diag(5, 0) <= t diag(2, 0) exactly when t >= 5/2.
  EXPECT_NEAR(r.t_min->value, 2.5, 1e-12);
  EXPECT_EQ(r.dp_range_eq, true);
  EXPECT_EQ(r.verdict, Verdict::SolvablePositive);
  EXPECT_EQ(r.criteria_agree, true);
}

TEST(PositiveSolvability, ThreeByThreePair) {
  const SolvabilityReport r = positive_solvability(fixtures::rk_a(), fixtures::rk_c(), kTol);
  EXPECT_EQ(r.dp_range_eq, false);
  EXPECT_EQ(r.ca_star_psd, true);
  ASSERT_TRUE(r.t_min);
  EXPECT_FALSE(r.t_min->finite);
  EXPECT_EQ(r.verdict, Verdict::SolvableHermitian);
  EXPECT_EQ(r.certificate.failed_condition, "dp_range_eq");
  EXPECT_EQ(r.criteria_agree, true);
}

TEST(PositiveSolvability, SelfPairHasUnitScale) {
  oracle::Rng rng(24);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 5)(rng);
    const Matrix a = oracle::random_rank(rng, n, n, std::uniform_int_distribution<Eigen::Index>(1, n)(rng));
    const SolvabilityReport r = positive_solvability(a, a, kTol);
    ASSERT_TRUE(r.t_min && r.t_min->finite);
    EXPECT_NEAR(r.t_min->value, 1.0, 1e-9);
    EXPECT_EQ(r.verdict, Verdict::SolvablePositive);
  }
}

TEST(PositiveSolvability, ZeroRightHandSide) {
  const SolvabilityReport r = positive_solvability(identity(2), Matrix::Zero(2, 2), kTol);
  ASSERT_TRUE(r.t_min && r.t_min->finite);
  EXPECT_EQ(r.t_min->value, 0.0);
  EXPECT_EQ(r.verdict, Verdict::SolvablePositive);
}

TEST(PositiveSolvability, ProductsVanishingUpToRoundoff) {
  // Rotated copy of A = diag(1, 0), X = [[0, 1], [1, 0]]: DP and CA* vanish
  // in exact arithmetic, so CC* <= t CA* has no solution.
  oracle::Rng rng(25);
  for (int k = 0; k < 50; ++k) {
    const Matrix u = oracle::random_unitary(rng, 2);
    const Matrix a = u * diag({1, 0}) * u.adjoint();
    const Matrix c = a * u * mat({{0, 1}, {1, 0}}) * u.adjoint();
    const SolvabilityReport r = positive_solvability(a, c, kTol);
    EXPECT_EQ(r.verdict, Verdict::SolvableHermitian);
    EXPECT_EQ(r.dp_range_eq, false);
    ASSERT_TRUE(r.t_min);
    EXPECT_FALSE(r.t_min->finite);
    EXPECT_EQ(r.criteria_agree, true);
    ASSERT_TRUE(r.lambda_estimate);
    EXPECT_EQ(r.lambda_estimate->status, LambdaStatus::Divergent);
  }
}

TEST(PositiveSolvability, ScaleDefinesLoewnerBound) {
  oracle::Rng rng(26);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 5)(rng);
    const Matrix a = oracle::random_rank(rng, n, n, std::uniform_int_distribution<Eigen::Index>(1, n)(rng));
    const Matrix x = oracle::random_psd(rng, n, std::uniform_int_distribution<Eigen::Index>(0, n)(rng));
    const Matrix c = a * x;
    const SolvabilityReport r = positive_solvability(a, c, kTol);
    ASSERT_EQ(r.verdict, Verdict::SolvablePositive);
    ASSERT_TRUE(r.t_min->finite);
    const Matrix cas = c * a.adjoint();
    const Matrix gap = r.t_min->value * 0.5 * (cas + cas.adjoint()) - c * c.adjoint();
    EXPECT_GE(oracle::min_eig(gap), -1e-8 * std::max(1.0, opnorm(c) * opnorm(c)));
    // Any positive solution bounds t_min by its norm.
    EXPECT_LE(r.t_min->value, opnorm(x) * (1 + 1e-8) + 1e-12);
  }
}

TEST(PositiveSolution, ExamplePair) {
  const Matrix x = positive_solution(fixtures::ex_a(), fixtures::ex_c(), Matrix::Zero(2, 2), kTol);
  EXPECT_LT(max_abs(x - mat({{2, 1}, {1, 0.5}})), 1e-12);
  const RealVector ev = oracle::jacobi_eigen(x).values;
  EXPECT_NEAR(ev(0), 0.0, 1e-12);
  EXPECT_NEAR(ev(1), 2.5, 1e-12);
  EXPECT_LT(max_abs(fixtures::ex_a() * x - fixtures::ex_c()), 1e-12);
}

TEST(PositiveSolution, SelfPairGivesProjector) {
  oracle::Rng rng(27);
  const Matrix a = oracle::random_rank(rng, 4, 4, 2);
  const Matrix x = positive_solution(a, a, Matrix::Zero(4, 4), kTol);
  EXPECT_LT(opnorm(x - oracle::row_projector(a)), 1e-9);
}

TEST(PositiveSolution, FamilyMembersArePositiveSolutions) {
  oracle::Rng rng(28);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
    const Matrix a = oracle::random_rank(rng, n, n, std::uniform_int_distribution<Eigen::Index>(0, n)(rng));
    const Matrix c = a * oracle::random_psd(rng, n, std::uniform_int_distribution<Eigen::Index>(0, n)(rng));
    const Matrix z = oracle::random_psd(rng, n, std::uniform_int_distribution<Eigen::Index>(0, n)(rng));
    const Matrix x = positive_solution(a, c, z, kTol);
    EXPECT_TRUE(oracle::oracle_psd(x));
    EXPECT_LT(opnorm(a * x - c), 1e-9 * std::max(1.0, opnorm(a) * opnorm(x)));
  }
}

TEST(PositiveSolution, Errors) {
  EXPECT_EQ(kind_of([] { positive_solution(fixtures::rk_a(), fixtures::rk_c(), Matrix::Zero(3, 3), kTol); }),
            ErrorKind::NotSolvablePositive);
  EXPECT_EQ(kind_of([] { positive_solution(fixtures::ex_a(), fixtures::ex_c(), -identity(2), kTol); }),
            ErrorKind::ParameterNotPSD);
}

TEST(TnSequence, ExamplePairConvergesToHalf) {
  // (I-P) D* (DP)^+ D (I-P) = diag(0, 1/2).
  const auto seq = tn_sequence(fixtures::ex_a(), fixtures::ex_c(), std::uint64_t{1} << 30, kTol);
  ASSERT_EQ(seq.size(), 31u);
  for (std::size_t i = 1; i < seq.size(); ++i) EXPECT_GE(seq[i].norm, seq[i - 1].norm);
  EXPECT_NEAR(seq.back().norm, 0.5, 1e-8);
  // n / (2n + 1) in closed form.
  EXPECT_NEAR(seq[0].norm, 1.0 / 3.0, 1e-14);
}

TEST(TnSequence, ThreeByThreeGrowsLinearly) {
  const auto seq = tn_sequence(fixtures::rk_a(), fixtures::rk_c(), 1024, kTol);
  for (const TnEntry& e : seq) EXPECT_NEAR(e.norm, static_cast<double>(e.n), 1e-9 * e.n);
}

TEST(TnSequence, SelfPairIsZero) {
  oracle::Rng rng(29);
  const Matrix a = oracle::random_rank(rng, 4, 4, 2);
  for (const TnEntry& e : tn_sequence(a, a, 1 << 20, kTol)) EXPECT_LT(e.norm, 1e-9);
}

TEST(TnSequence, PreconditionFailed) {
  EXPECT_EQ(kind_of([] { tn_sequence(identity(2), -identity(2), 4, kTol); }),
            ErrorKind::PreconditionFailed);
}

TEST(LambdaDiagnostic, Examples) {
  const LambdaEstimate ex = lambda_diagnostic(fixtures::ex_a(), fixtures::ex_c(), kDefaultHorizon, kTol);
  EXPECT_EQ(ex.status, LambdaStatus::Converged);
  EXPECT_NEAR(ex.value, 0.5, 1e-9);
  const LambdaEstimate rk = lambda_diagnostic(fixtures::rk_a(), fixtures::rk_c(), kDefaultHorizon, kTol);
  EXPECT_EQ(rk.status, LambdaStatus::Divergent);
  oracle::Rng rng(30);
  const Matrix a = oracle::random_rank(rng, 3, 3, 2);
  const LambdaEstimate self = lambda_diagnostic(a, a, kDefaultHorizon, kTol);
  EXPECT_EQ(self.status, LambdaStatus::Converged);
  EXPECT_LT(self.value, 1e-9);
}

TEST(BlockPsdTest, Examples) {
  EXPECT_TRUE(block_psd_test(mat({{1}}), mat({{1}}), mat({{1}}), kTol));
  EXPECT_FALSE(block_psd_test(diag({1, 0}), mat({{0}, {1}}), mat({{5}}), kTol));
}

TEST(BlockPsdTest, AgreesWithEigenvalueOracle) {
  oracle::Rng rng(31);
  int positive = 0;
  for (int k = 0; k < 300; ++k) {
    const Eigen::Index p = std::uniform_int_distribution<Eigen::Index>(1, 3)(rng);
    const Eigen::Index q = std::uniform_int_distribution<Eigen::Index>(1, 3)(rng);
    const Eigen::Index n = p + q;
    Matrix m = k % 2 == 0 ? oracle::random_psd(rng, n, std::uniform_int_distribution<Eigen::Index>(0, n)(rng))
                          : oracle::random_indefinite(rng, n);
    m = 0.5 * (m + m.adjoint());
    const bool expected = oracle::oracle_psd(m);
    positive += expected;
    EXPECT_EQ(block_psd_test(m.topLeftCorner(p, p), m.topRightCorner(p, q),
                             m.bottomRightCorner(q, q), kTol),
              expected);
  }
  EXPECT_GT(positive, 100);
}

TEST(BlockPsdTest, Errors) {
  EXPECT_EQ(kind_of([] { block_psd_test(mat({{1}}), mat({{1, 2}}), mat({{1}}), kTol); }),
            ErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([] { block_psd_test(mat({{0, 1}, {0, 0}}), mat({{1}, {1}}), mat({{1}}), kTol); }),
            ErrorKind::NotHermitian);
}

TEST(SolutionFamily, PositiveCarriesBasePoint) {
  const SolutionFamily f = solution_family(fixtures::ex_a(), fixtures::ex_c(), SolutionKind::Positive, kTol);
  ASSERT_TRUE(f.x_zero);
  EXPECT_LT(max_abs(*f.x_zero - mat({{2, 1}, {1, 0.5}})), 1e-12);
  EXPECT_LT(max_abs(f.projector_p - diag({1, 0})), 1e-15);
  EXPECT_LT(max_abs(f.complement - diag({0, 1})), 1e-15);
}
