#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include <irgdeg/experiments.hpp>

using namespace irgdeg;

namespace {

ExperimentConfig config(ModelSpec spec, std::size_t reps, Seed seed, unsigned threads = 1) {
  ExperimentConfig cfg;
  cfg.model = std::move(spec);
  cfg.replications = reps;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t c = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++c;
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

TEST(Correlation, EmptyKernelHasNoDefinedCorrelation) {
  auto cfg = config(ModelSpec::homogeneous(6, 0.0), 50, 1);
  const auto counts = sample_degree_counts(build_kernel(cfg.model), 50, 1, 1);
  for (const auto& w : counts) EXPECT_EQ(w[0], 6u);
  EXPECT_EQ(run_correlation_experiment(cfg).dim(), 0u);
  cfg.full_range = true;
  const auto full = run_correlation_experiment(cfg);
  ASSERT_EQ(full.dim(), 6u);
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) EXPECT_FALSE(full.corr_at(a, b).has_value());
  EXPECT_NE(correlation_csv(full).find("0,0,NA,NA"), std::string::npos);
}

TEST(Correlation, NeighbouringCountsNegativeUnderM1) {
  const auto res = run_correlation_experiment(config(ModelSpec::m1(100), 4000, 20240601));
  const auto i0 = res.index_of(0), i1 = res.index_of(1);
  ASSERT_TRUE(i0 && i1);
  const double c = *res.corr_at(*i0, *i1);
  EXPECT_LT(c, 0.0);
  EXPECT_GT(-c / *res.se_at(*i0, *i1), 3.0);
  EXPECT_NEAR(*res.corr_at(*i0, *i0), 1.0, 1e-12);
}

TEST(Correlation, MatchesHandComputedPearson) {
  // Counts fed directly: W_0 = (1, 2, 3, 4), W_1 = (2, 4, 6, 9) over four replications.
  const std::vector<std::vector<std::uint32_t>> counts{{1, 2}, {2, 4}, {3, 6}, {4, 9}};
  const auto res = correlation_from_counts(counts, false);
  ASSERT_EQ(res.dim(), 2u);
  const double mx = 2.5, my = 5.25;
  double sxy = 0, sxx = 0, syy = 0;
  const double x[] = {1, 2, 3, 4}, y[] = {2, 4, 6, 9};
  for (int k = 0; k < 4; ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  EXPECT_NEAR(*res.corr_at(0, 1), sxy / std::sqrt(sxx * syy), 1e-14);
  EXPECT_NEAR(*res.corr_at(1, 0), *res.corr_at(0, 1), 0.0);
}

TEST(Correlation, BitIdenticalAcrossRerunsAndThreads) {
  const auto a = correlation_csv(run_correlation_experiment(config(ModelSpec::m2(60), 500, 4, 1)));
  const auto b = correlation_csv(run_correlation_experiment(config(ModelSpec::m2(60), 500, 4, 1)));
  const auto c = correlation_csv(run_correlation_experiment(config(ModelSpec::m2(60), 500, 4, 3)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a, correlation_csv(run_correlation_experiment(config(ModelSpec::m2(60), 500, 5, 1))));
}

TEST(Correlation, RejectsBadConfig) {
  EXPECT_THROW(run_correlation_experiment(config(ModelSpec::m1(10), 0, 1)), ValidationError);
  EXPECT_EQ(run_correlation_experiment(config(ModelSpec::m1(10), 1, 1)).dim(), 0u);
  EXPECT_THROW(run_correlation_experiment(config(ModelSpec::m1(1), 10, 1)), ValidationError);
}

TEST(PowerLaw, CompleteGraphHasFullTail) {
  const auto t = run_powerlaw_experiment(config(ModelSpec::homogeneous(7, 1.0), 3, 1));
  ASSERT_EQ(t.d.size(), 6u);
  for (std::size_t k = 0; k < t.d.size(); ++k) {
    EXPECT_EQ(t.d[k], k + 1);
    EXPECT_EQ(t.z[k], 7.0);
  }
}

TEST(PowerLaw, TailCountsNonIncreasing) {
  for (auto spec : {ModelSpec::m1(200), ModelSpec::m3(200), ModelSpec::m4(200)}) {
    const auto t = run_powerlaw_experiment(config(spec, 20, 9));
    for (std::size_t k = 1; k < t.z.size(); ++k) EXPECT_LE(t.z[k], t.z[k - 1]);
    EXPECT_GT(t.z.back(), 0.0);
  }
}

TEST(PowerLaw, SnapshotStable) {
  const auto t = run_powerlaw_experiment(config(ModelSpec::m1(1000), 1000, 20240601));
  const auto golden = read_file(IRGDEG_TEST_DATA "/powerlaw_m1_n1000.csv");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(powerlaw_csv(t), golden);
}

TEST(QQ, ConstantSampleRejected) {
  EXPECT_THROW(qq_data(std::vector<double>(10, 3.0)), ValidationError);
  EXPECT_THROW(qq_data(std::vector<double>{1.0}), ValidationError);
  EXPECT_THROW(qq_data(config(ModelSpec::homogeneous(5, 1.0), 200, 1), 4), ValidationError);
}

TEST(QQ, ExactNormalsLieOnDiagonal) {
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> z;
  std::vector<double> sample(100000);
  for (auto& x : sample) x = 3.0 + 2.0 * z(gen);
  const auto pts = qq_data(sample);
  // Compared on the probability scale, the gap is a Kolmogorov-Smirnov statistic (about 0.004 at R = 1e5).
  const auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, std::abs(phi(p.sample_quantile) - phi(p.normal_quantile)));
  EXPECT_LT(worst, 0.05);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    EXPECT_LT(pts[k - 1].normal_quantile, pts[k].normal_quantile);
    EXPECT_LE(pts[k - 1].sample_quantile, pts[k].sample_quantile);
  }
}

TEST(QQ, GraphCountsProduceOneRowPerReplication) {
  const auto pts = qq_data(config(ModelSpec::m1(100), 300, 3), 1);
  EXPECT_EQ(pts.size(), 300u);
  EXPECT_EQ(count_of(qq_csv(pts), "\n"), 301u);
}

TEST(Svg, OneMarkPerPoint) {
  const auto svg = emit_svg({{1.0, 2.0}, {3.0, 5.0}}, {});
  EXPECT_EQ(count_of(svg, "<circle"), 2u);
  EXPECT_EQ(svg, emit_svg({{1.0, 2.0}, {3.0, 5.0}}, {}));
}

TEST(Svg, LogAxesLabelled) {
  const auto svg = emit_svg({{1.0, 100.0}, {10.0, 10.0}, {100.0, 1.0}}, {"d", "Z_d", true, ""});
  EXPECT_NE(svg.find("log10(d)"), std::string::npos);
  EXPECT_NE(svg.find("log10(Z_d)"), std::string::npos);
  EXPECT_THROW(emit_svg({{0.0, 1.0}}, {"d", "Z_d", true, ""}), ValidationError);
  EXPECT_THROW(emit_svg({}, {}), ValidationError);
}
