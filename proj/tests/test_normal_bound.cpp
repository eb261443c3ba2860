#include <cmath>

#include <gtest/gtest.h>

#include <irgdeg/exact_oracle.hpp>
#include <irgdeg/normal_bound.hpp>
#include <irgdeg/verify.hpp>

using namespace irgdeg;

namespace {

EdgeProbabilityMatrix pair_half() { return build_kernel(ModelSpec::homogeneous(2, 0.5)); }

EdgeProbabilityMatrix five() {
  return EdgeProbabilityMatrix(5, {0,    0.15, 0.4,  0.65, 0.9,  //
                                   0.15, 0,    0.35, 0.55, 0.25, //
                                   0.4,  0.35, 0,    0.7,  0.05, //
                                   0.65, 0.55, 0.7,  0,    0.45, //
                                   0.9,  0.25, 0.05, 0.45, 0});
}

} // namespace

TEST(DegreeSelection, Validation) {
  EXPECT_NO_THROW(DegreeSelection({2, 0}, 3));
  EXPECT_THROW(DegreeSelection({}, 3), ValidationError);
  EXPECT_THROW(DegreeSelection({1, 1}, 3), ValidationError);
  EXPECT_THROW(DegreeSelection({3}, 3), ValidationError);
}

TEST(RemoveBernoulli, InvertsConvolution) {
  for (Seed s = 0; s < 20; ++s) {
    const auto k = random_kernel(9, s);
    const auto full = degree_pmf(k, 0).probs;
    for (Vertex u = 1; u < 9; ++u) {
      const auto direct = degree_pmf(k, 0, {u}).probs;
      const auto removed = remove_bernoulli(full, k(0, u));
      ASSERT_EQ(removed.size(), direct.size());
      for (std::size_t d = 0; d < direct.size(); ++d) EXPECT_NEAR(removed[d], direct[d], 1e-12);
    }
  }
}

TEST(RemoveBernoulli, CertainSummands) {
  const auto removed = remove_bernoulli({0.0, 0.3, 0.7}, 1.0);
  EXPECT_NEAR(removed[0], 0.3, 1e-15);
  EXPECT_NEAR(removed[1], 0.7, 1e-15);
  const auto kept = remove_bernoulli({0.3, 0.7, 0.0}, 0.0);
  EXPECT_NEAR(kept[0], 0.3, 1e-15);
}

TEST(Lambda, Examples) {
  EXPECT_NEAR(lambda_vector(pair_half(), DegreeSelection({1}, 2))[0], 1.0, 1e-15);
  EXPECT_NEAR(lambda_vector(build_kernel(ModelSpec::m1(100)), DegreeSelection({0}, 100))[0], 36.97296376497265, 1e-10);
  EXPECT_DOUBLE_EQ(lambda_vector(build_kernel(ModelSpec::homogeneous(6, 0.0)), DegreeSelection({0}, 6))[0], 6.0);
}

TEST(Covariance, Examples) {
  EXPECT_NEAR(covariance_exact(pair_half(), DegreeSelection({1}, 2))(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(covariance_exact(build_kernel(ModelSpec::homogeneous(5, 0.0)), DegreeSelection({0}, 5))(0, 0), 0.0, 1e-14);
  const auto c = covariance_exact(build_kernel(ModelSpec::homogeneous(3, 0.5)), DegreeSelection({0, 2}, 3));
  EXPECT_NEAR(c(0, 0), 0.9375, 1e-12);
  EXPECT_NEAR(c(0, 1), -0.5625, 1e-12);
  EXPECT_NEAR(c(1, 0), -0.5625, 1e-12);
  EXPECT_NEAR(c(1, 1), 0.9375, 1e-12);
}

TEST(Covariance, GoldenFiveVertexKernel) {
  const auto c = covariance_exact(five(), DegreeSelection({1, 2}, 5));
  EXPECT_NEAR(c(0, 0), 1.303962081874996, 1e-12);
  EXPECT_NEAR(c(0, 1), -0.6964063821875, 1e-12);
  EXPECT_NEAR(c(1, 1), 1.10056533734374, 1e-12);
}

TEST(Covariance, MatchesEnumerationOnRandomKernels) {
  for (Seed s = 0; s < 15; ++s) {
    const std::size_t n = 2 + s % 4;
    const auto k = random_kernel(n, derive_seed(3, s));
    std::vector<std::size_t> all(n);
    for (std::size_t d = 0; d < n; ++d) all[d] = d;
    const DegreeSelection sel(all, n);
    const auto exact = covariance_exact(k, sel);
    EXPECT_LT((exact - enumerate_count_covariance(k, sel)).max_abs(), 1e-10);
    EXPECT_TRUE(exact.is_symmetric(1e-12));
  }
}

TEST(Covariance, ExtremeProbabilities) {
  // Entries of exactly 0 and 1 exercise both branches of the leave-one-out recursion.
  const EdgeProbabilityMatrix k(4, {0, 1, 0, 0.5, 1, 0, 0.3, 1, 0, 0.3, 0, 0.9, 0.5, 1, 0.9, 0});
  const DegreeSelection sel({0, 1, 2, 3}, 4);
  EXPECT_LT((covariance_exact(k, sel) - enumerate_count_covariance(k, sel)).max_abs(), 1e-10);
}

TEST(Sigma0, AllZeroKernel) {
  EXPECT_NEAR(covariance_sigma0(build_kernel(ModelSpec::homogeneous(5, 0.0)), DegreeSelection({0}, 5))(0, 0), 0.0, 1e-15);
}

TEST(Sigma0, SymmetricAndCloseToCovarianceForHomogeneousKernel) {
  const auto k = build_kernel(ModelSpec::homogeneous(60, 0.05));
  const DegreeSelection sel({1, 3, 4}, 60);
  const auto s0 = covariance_sigma0(k, sel);
  const auto s = covariance_exact(k, sel);
  EXPECT_TRUE(s0.is_symmetric(1e-12));
  EXPECT_LT((s0 - s).max_abs(), 0.05 * s.max_abs());
}

TEST(BoundComponents, PairExample) {
  const auto k = pair_half();
  const DegreeSelection sel({1}, 2);
  const auto r = bound_components(k, sel);
  EXPECT_NEAR(r.tau, std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(r.bigM, 1.0, 1e-15);
  EXPECT_NEAR(r.B[0], 128.0 * std::sqrt(22.0), 1e-10);
  EXPECT_NEAR(r.B[0], 600.373217257399, 1e-9);
  EXPECT_NEAR(r.S, 2.0, 1e-14);
  EXPECT_NEAR(r.sum_p_squared, 0.5, 1e-15);
  EXPECT_NEAR(r.total(1.0, 1.0), 1209.4604797227087, 1e-9);
  EXPECT_NEAR(mvn_bound(r, r.lambda, sel, 1.0, 1.0, 1), 1209.4604797227087, 1e-9);
}

TEST(BoundComponents, AllZeroKernelConstants) {
  const auto r = bound_constants(build_kernel(ModelSpec::homogeneous(4, 0.0)), DegreeSelection({1, 2}, 4));
  EXPECT_EQ(r.bigM, 0.0);
  EXPECT_EQ(r.B[0], 0.0);
  EXPECT_EQ(r.B[1], 0.0);
  EXPECT_EQ(r.S, 0.0);
}

TEST(BoundComponents, DegenerateSelectionRejected) {
  EXPECT_THROW(bound_components(build_kernel(ModelSpec::homogeneous(4, 0.0)), DegreeSelection({1, 2}, 4)),
               ValidationError);
  // W_0 + W_1 = 2 for n = 2: the pair selection has no spread.
  EXPECT_THROW(bound_components(pair_half(), DegreeSelection({0, 1}, 2)), ValidationError);
}

TEST(BoundComponents, SIsMaximumOverPairs) {
  const auto r = bound_components(five(), DegreeSelection({0, 2, 3}, 5));
  double m = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m = std::max(m, r.S_pairs(i, j));
  EXPECT_EQ(r.S, m);
  EXPECT_TRUE(r.S_pairs.is_symmetric(1e-15));
}

TEST(BoundComponents, HomogeneousKernelHasNoHeterogeneityTerm) {
  const auto r = bound_components(build_kernel(ModelSpec::homogeneous(30, 0.1)), DegreeSelection({2, 3}, 30));
  EXPECT_NEAR(r.S_heterogeneity, 0.0, 1e-15);
  const auto m2 = bound_components(build_kernel(ModelSpec::m2(30)), DegreeSelection({2, 3}, 30));
  EXPECT_GT(m2.S_heterogeneity, 0.0);
}

TEST(MvnBound, LinearInNorms) {
  const auto k = five();
  const DegreeSelection sel({1, 2}, 5);
  const auto r = bound_components(k, sel);
  EXPECT_EQ(mvn_bound(r, r.lambda, sel, 0.0, 0.0, 2), 0.0);
  EXPECT_NEAR(mvn_bound(r, r.lambda, sel, 2.0, 6.0, 2), 2.0 * mvn_bound(r, r.lambda, sel, 1.0, 3.0, 2), 1e-9);
  EXPECT_NEAR(r.total(1.5, 0.5), mvn_bound(r, r.lambda, sel, 1.5, 0.5, 2), 1e-9);
  EXPECT_THROW(mvn_bound(r, r.lambda, sel, -1.0, 0.0, 2), ValidationError);
  EXPECT_THROW(mvn_bound(r, r.lambda, sel, 1.0, 1.0, 3), ValidationError);
}

TEST(MvnBound, DominatesExactCosineDiscrepancy) {
  const auto checks = verify_normal_suite(4, 5, 12);
  ASSERT_FALSE(checks.empty());
  for (const auto& c : checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(CouplingMoment, ForcedDegreeGivesZero) {
  const auto k = build_kernel(ModelSpec::homogeneous(5, 1.0));
  const DegreeSelection sel({4}, 5);
  EXPECT_EQ(mc_coupling_moment(k, sel, 0, 0, 0, 200, 3).mean, 0.0);
  EXPECT_EQ(exact_coupling_moment(k, sel, 0, 0, 0), 0.0);
}

TEST(CouplingMoment, ThreeVertexGolden) {
  const auto k = build_kernel(ModelSpec::homogeneous(3, 0.5));
  const DegreeSelection sel({1}, 3);
  EXPECT_NEAR(exact_coupling_moment(k, sel, 0, 0, 0), 1.0, 1e-12);
  const auto mc = mc_coupling_moment(k, sel, 0, 0, 0, 20000, 5);
  EXPECT_NEAR(mc.mean, 1.0, 4.0 * mc.standard_error);
}

TEST(CouplingMoment, MonteCarloAgreesWithExactAndMajorant) {
  const auto k = five();
  const DegreeSelection sel({1, 2}, 5);
  for (std::size_t i = 0; i < 2; ++i) {
    const double exact = exact_coupling_moment(k, sel, i, 0, 1);
    const auto mc = mc_coupling_moment(k, sel, i, 0, 1, 20000, 40 + i);
    EXPECT_NEAR(mc.mean, exact, 4.0 * mc.standard_error + 1e-12);
    EXPECT_LE(exact, coupling_moment_majorant(k, sel, i));
  }
}

TEST(CouplingMoment, ThreadCountDoesNotChangeResult) {
  const auto k = build_kernel(ModelSpec::m3(20));
  const DegreeSelection sel({2, 4}, 20);
  const auto one = mc_coupling_moment(k, sel, 1, 0, 1, 300, 77, 1);
  const auto four = mc_coupling_moment(k, sel, 1, 0, 1, 300, 77, 4);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.standard_error, four.standard_error);
}

TEST(CouplingMoment, Errors) {
  const auto k = build_kernel(ModelSpec::homogeneous(4, 0.0));
  EXPECT_THROW(mc_coupling_moment(k, DegreeSelection({2}, 4), 0, 0, 0, 10, 1), ValidationError);
  EXPECT_THROW(mc_coupling_moment(pair_half(), DegreeSelection({1}, 2), 0, 0, 1, 10, 1), ValidationError);
  EXPECT_THROW(mc_coupling_moment(pair_half(), DegreeSelection({1}, 2), 0, 0, 0, 0, 1), ValidationError);
}
