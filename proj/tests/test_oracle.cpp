#include <gtest/gtest.h>

#include "axc/douglas.hpp"
#include "axc/io.hpp"
#include "axc/oracle.hpp"
#include "fixtures.hpp"

using namespace axc;
using namespace axc::oracle;
using fixtures::diag;
using fixtures::mat;
using fixtures::max_abs;

TEST(JacobiEigen, ReconstructsRandomHermitian) {
  Rng rng(41);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 8)(rng);
    const Matrix g = random_gaussian(rng, n, n);
    const Matrix h = g + g.adjoint();
    const HermitianEigen e = jacobi_eigen(h);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
    EXPECT_LT(opnorm(e.vectors.adjoint() * e.vectors - identity(n)), 1e-12);
    const Matrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(opnorm(back - h), 1e-11 * std::max(1.0, opnorm(h)));
  }
}

TEST(JacobiEigen, KnownSpectrum) {
  const HermitianEigen e = jacobi_eigen(mat({{2, 1}, {1, 2}}));
  EXPECT_NEAR(e.values(0), 1.0, 1e-15);
  EXPECT_NEAR(e.values(1), 3.0, 1e-15);
}

TEST(LsqSolve, Examples) {
  EXPECT_LT(max_abs(lsq_solve(fixtures::ex_a(), fixtures::ex_c()).solution - mat({{2, 1}, {0, 0}})), 1e-12);
  const Matrix c = mat({{1, 2}, {3, 4}});
  EXPECT_LT(max_abs(lsq_solve(identity(2), c).solution - c), 1e-14);
  EXPECT_NEAR(lsq_solve(fixtures::dj_a(), fixtures::dj_c()).residual, 1.0, 1e-14);
}

TEST(Probe, Examples) {
  EXPECT_TRUE(psd_quadratic_probe(mat({{2, 1}, {1, 1}}), 1000, 1));
  EXPECT_FALSE(psd_quadratic_probe(mat({{0, 1}, {1, 0}}), 1000, 1));
  EXPECT_TRUE(psd_quadratic_probe(diag({1, 0}), 1000, 1));
  EXPECT_THROW(psd_quadratic_probe(mat({{0, 1}, {0, 0}}), 10, 1), Error);
}

TEST(Probe, NeverRejectsPsdAndCatchesIndefinite) {
  Rng rng(42);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
    EXPECT_TRUE(psd_quadratic_probe(random_psd(rng, n, std::uniform_int_distribution<Eigen::Index>(0, n)(rng)),
                                    10000, rng()));
    if (n >= 2) EXPECT_FALSE(psd_quadratic_probe(random_indefinite(rng, n), 10000, rng()));
  }
}

TEST(PositiveSearch, ExamplePairFindsSolution) {
  const auto x = positive_search(fixtures::ex_a(), fixtures::ex_c(), 100, 1);
  ASSERT_TRUE(x);
  EXPECT_TRUE(oracle_psd(*x));
  EXPECT_LT(max_abs(fixtures::ex_a() * *x - fixtures::ex_c()), 1e-12);
}

TEST(PositiveSearch, ThreeByThreeExhaustsBudget) {
  EXPECT_FALSE(positive_search(fixtures::rk_a(), fixtures::rk_c(), 10000, kDefaultSeed));
}

TEST(PositiveSearch, SelfPairReturnsProjectorFirst) {
  Rng rng(43);
  const Matrix a = random_rank(rng, 4, 4, 2);
  const auto x = positive_search(a, a, 1, 7);
  ASSERT_TRUE(x);
  EXPECT_LT(opnorm(*x - row_projector(a)), 1e-9);
}

TEST(PositiveSearch, RejectsNonHermitianCandidates) {
  // CA* is not Hermitian, so no Hermitian (let alone positive) solution exists.
  Rng rng(44);
  const Matrix a = random_rank(rng, 4, 4, 1);
  const Matrix c = a * random_gaussian(rng, 4, 4);
  EXPECT_FALSE(positive_search(a, c, 200, 3));
}

TEST(OraclePsd, RequiresHermitian) {
  EXPECT_TRUE(oracle_psd(mat({{2, 1}, {1, 1}})));
  EXPECT_FALSE(oracle_psd(mat({{2, 1}, {-1, 1}})));
  EXPECT_FALSE(oracle_psd(-identity(2)));
}

TEST(DouglasProperties, ExamplePair) {
  const DouglasProperties p = douglas_properties_check(fixtures::ex_a(), fixtures::ex_c());
  EXPECT_NEAR(p.norm_squared, 5.0, 1e-12);
  EXPECT_NEAR(p.mu_star, 5.0, 1e-12);
  EXPECT_TRUE(p.all());
}

TEST(DouglasProperties, RandomConsistentPairs) {
  Rng rng(45);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
    const Eigen::Index m = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
    const Matrix a = random_rank(rng, n, m, std::uniform_int_distribution<Eigen::Index>(0, std::min(n, m))(rng));
    const Matrix c = a * random_gaussian(rng, m, std::uniform_int_distribution<Eigen::Index>(1, 6)(rng));
    EXPECT_TRUE(douglas_properties_check(a, c).all()) << k;
  }
}

TEST(Generators, InstancesHaveTheirKind) {
  Rng rng(46);
  const ToleranceConfig tol;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, 6)(rng);
    const auto kind = static_cast<InstanceKind>(k % kInstanceKinds);
    const Instance inst = random_instance(rng, n, RankPolicy::Random, kind);
    ASSERT_EQ(inst.a.rows(), inst.a.cols());
    ASSERT_EQ(inst.c.rows(), inst.a.rows());
    const douglas::SolvabilityReport r = douglas::positive_solvability(inst.a, inst.c, tol);
    switch (inst.kind) {
      case InstanceKind::Positive:
        EXPECT_EQ(r.verdict, douglas::Verdict::SolvablePositive);
        break;
      case InstanceKind::RangeDeficient:
        EXPECT_EQ(r.verdict, douglas::Verdict::SolvableHermitian);
        EXPECT_EQ(r.dp_range_eq, false);
        break;
      case InstanceKind::Inconsistent:
        EXPECT_EQ(r.verdict, douglas::Verdict::Unsolvable);
        break;
      default:
        EXPECT_NE(r.verdict, douglas::Verdict::Unsolvable);
    }
    if (inst.witness) {
      EXPECT_LT(opnorm(inst.a * *inst.witness - inst.c), 1e-9 * std::max(1.0, opnorm(inst.c)));
    }
  }
}

TEST(PropertySuite, CleanAndDeterministic) {
  TrialSpec spec;
  spec.trials = 200;
  spec.seed = 2024;
  const PropertyReport a = run_property_suite(spec);
  const PropertyReport b = run_property_suite(spec);
  EXPECT_EQ(a.violations(), 0u);
  EXPECT_FALSE(a.first_failure);
  EXPECT_EQ(io::to_json(a).dump(), io::to_json(b).dump());
  for (const PropertyCount& p : a.properties) EXPECT_GT(p.checked, 0u) << p.name;
}

TEST(PropertySuite, ScalarsAndRankPolicies) {
  for (RankPolicy policy : {RankPolicy::Full, RankPolicy::Deficient, RankPolicy::Random}) {
    TrialSpec spec;
    spec.trials = 100;
    spec.rank_policy = policy;
    EXPECT_EQ(run_property_suite(spec).violations(), 0u) << to_string(policy);
  }
  TrialSpec scalars;
  scalars.trials = 100;
  scalars.max_dim = 1;
  EXPECT_EQ(run_property_suite(scalars).violations(), 0u);
}

TEST(PropertySuite, SeedsChangeTheReport) {
  TrialSpec a, b;
  a.trials = b.trials = 20;
  b.seed = a.seed + 1;
  EXPECT_NE(io::to_json(run_property_suite(a)).dump(), io::to_json(run_property_suite(b)).dump());
}

TEST(TrialSpec, Validation) {
  TrialSpec spec;
  spec.trials = 0;
  EXPECT_THROW(run_property_suite(spec), Error);
  spec.trials = 1;
  spec.max_dim = 9;
  EXPECT_THROW(run_property_suite(spec), Error);
}
