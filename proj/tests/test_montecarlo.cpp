#include "treeshape/exact.hpp"
#include "treeshape/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace ts = treeshape;

namespace {

void expect_same(const ts::MomentsReport& a, const ts::MomentsReport& b) {
  EXPECT_EQ(a.mean_s, b.mean_s);
  EXPECT_EQ(a.mean_c, b.mean_c);
  EXPECT_EQ(a.var_s, b.var_s);
  EXPECT_EQ(a.var_c, b.var_c);
  EXPECT_EQ(a.cov, b.cov);
  EXPECT_EQ(a.cor, b.cor);
  EXPECT_EQ(a.mean_gap, b.mean_gap);
  EXPECT_EQ(a.se_var_s, b.se_var_s);
}

}  // namespace

TEST(ParallelFor, CoversEveryIndexOnce) {
  for (unsigned w : {1u, 2u, 5u}) {
    std::vector<int> hits(1000, 0);
    ts::parallel_for(hits.size(), w, [&](std::size_t i) { ++hits[i]; });
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
}

TEST(ParallelFor, PropagatesExceptions) {
  auto boom = [](std::size_t i) {
    if (i == 500) throw std::runtime_error("boom");
  };
  EXPECT_THROW(ts::parallel_for(1000, 3, boom), std::runtime_error);
  EXPECT_THROW(ts::parallel_for(1000, 1, boom), std::runtime_error);
}

TEST(PairedMoments, AgreesWithDirectFormulas) {
  const std::vector<double> x{1, 2, 4, 7, 11}, y{2, 1, 5, 8, 9};
  const auto m = ts::paired_moments(x, y);
  EXPECT_DOUBLE_EQ(m.mean_x, 5.0);
  EXPECT_DOUBLE_EQ(m.mean_y, 5.0);
  EXPECT_DOUBLE_EQ(m.var_x, (16 + 9 + 1 + 4 + 36) / 4.0);
  EXPECT_DOUBLE_EQ(m.var_y, (9 + 16 + 0 + 9 + 16) / 4.0);
  EXPECT_DOUBLE_EQ(m.cov, (12 + 12 + 0 + 6 + 24) / 4.0);
  EXPECT_NEAR(m.cor, 54.0 / std::sqrt(66.0 * 50.0), 1e-15);
  EXPECT_THROW(ts::paired_moments(std::vector<double>{1}, std::vector<double>{1}),
               std::invalid_argument);
}

TEST(PairedMoments, StableWithLargeOffset) {
  std::vector<double> x, y;
  for (int i = 0; i < 100000; ++i) {
    x.push_back(1e9 + (i % 2));
    y.push_back(1e9 - (i % 2));
  }
  const auto m = ts::paired_moments(x, y);
  EXPECT_NEAR(m.var_x, 0.25 * 100000 / 99999, 1e-9);
  EXPECT_NEAR(m.cor, -1.0, 1e-12);
}

TEST(EstimateMoments, DeterministicAcrossWorkers) {
  for (auto model : {ts::ModelKind::Yule, ts::ModelKind::Uniform}) {
    const auto a = ts::estimate_moments(model, 200, 3000, 1, 99);
    const auto b = ts::estimate_moments(model, 200, 3000, 4, 99);
    expect_same(a, b);
    EXPECT_EQ(a.trees_checked, 3u);
    const auto c = ts::estimate_moments(model, 200, 3000, 1, 100);
    EXPECT_NE(a.mean_s, c.mean_s);
  }
}

TEST(EstimateMoments, UniqueShapeHasZeroVariance) {
  const auto r = ts::estimate_moments(ts::ModelKind::Yule, 3, 500, 1, 1);
  EXPECT_EQ(r.var_s, 0.0);
  EXPECT_EQ(r.var_c, 0.0);
  EXPECT_TRUE(std::isnan(r.cor));
  EXPECT_THROW(ts::estimate_moments(ts::ModelKind::Yule, 1, 10, 1, 1), std::invalid_argument);
  EXPECT_THROW(ts::estimate_moments(ts::ModelKind::Catalan, 10, 10, 1, 1), std::invalid_argument);
}

TEST(EstimateMoments, YuleCenteringIsExact) {
  const auto r = ts::estimate_moments(ts::ModelKind::Yule, 700, 20000, 2, 5);
  EXPECT_NEAR(r.mean_s, 0.0, 3 * r.se_mean_s);
  EXPECT_NEAR(r.mean_c, 0.0, 3 * r.se_mean_c);
}

TEST(EstimateMoments, SmallNAgreesWithExactLaw) {
  for (auto model : {ts::ModelKind::Yule, ts::ModelKind::Uniform}) {
    for (std::size_t n : {4u, 7u, 10u}) {
      const auto r = ts::estimate_moments(model, n, 40000, 1, 17 + n);
      const auto ex = ts::exact_moments(ts::joint_pmf(n, model));
      const double nd = static_cast<double>(n);
      const double scale = model == ts::ModelKind::Yule ? nd : std::pow(nd, 1.5);
      const double mean_s = model == ts::ModelKind::Yule ? 0.0 : ts::to_double(ex.mean_s) / scale;
      const double mean_c = model == ts::ModelKind::Yule ? 0.0 : ts::to_double(ex.mean_c) / scale;
      const std::string where = std::string(ts::to_string(model)) + " n=" + std::to_string(n);
      EXPECT_NEAR(r.mean_s, mean_s, 4 * r.se_mean_s) << where;
      EXPECT_NEAR(r.mean_c, mean_c, 4 * r.se_mean_c) << where;
      EXPECT_NEAR(r.var_s, ts::to_double(ex.var_s) / (scale * scale), 4 * r.se_var_s) << where;
      EXPECT_NEAR(r.var_c, ts::to_double(ex.var_c) / (scale * scale), 4 * r.se_var_c) << where;
      EXPECT_NEAR(r.cov, ts::to_double(ex.cov_sc) / (scale * scale), 4 * r.se_cov) << where;
    }
  }
}

TEST(ConvergenceTable, UniformCorrelationAndGap) {
  const std::vector<std::size_t> ns{100, 1000, 10000};
  std::vector<std::size_t> seen;
  const auto rows = ts::convergence_table(ts::ModelKind::Uniform, ns, 2000, 3, 1,
                                          [&](std::size_t n) { seen.push_back(n); });
  EXPECT_EQ(seen, ns);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].report.n, ns[i]);
    EXPECT_EQ(rows[i].limit.mean_s, ts::kAiryMean);
    EXPECT_GT(rows[i].report.cor, 0.99);
  }
  EXPECT_GT(rows[2].report.cor, rows[0].report.cor);
  EXPECT_GT(rows[0].report.mean_gap, rows[1].report.mean_gap);
  EXPECT_GT(rows[1].report.mean_gap, rows[2].report.mean_gap);
  EXPECT_GT(rows[2].report.mean_gap, 0.0);
}

TEST(ConvergenceTable, YuleCorrelationNearLimit) {
  const std::vector<std::size_t> ns{100, 1000};
  const auto rows = ts::convergence_table(ts::ModelKind::Yule, ns, 20000, 4);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.report.cor, row.limit.cor, 0.005);
    EXPECT_NEAR(row.limit.cor, ts::limit_moments_yule().cor_sc, 0.0);
  }
  const std::vector<std::size_t> bad{1000, 100};
  EXPECT_THROW(ts::convergence_table(ts::ModelKind::Yule, bad, 10, 1), std::invalid_argument);
}

TEST(NpTest, BalancedTreeUnderYule) {
  const auto r = ts::np_test(ts::balanced(4), ts::ModelKind::Yule, 1000, 3);
  EXPECT_EQ(r.tail, ts::Tail::Upper);
  EXPECT_EQ(r.extreme_count, 1000u);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  const auto u = ts::np_test(ts::comb(4), ts::ModelKind::Uniform, 1000, 3);
  EXPECT_EQ(u.tail, ts::Tail::Lower);
  EXPECT_DOUBLE_EQ(u.p_value, 1.0);
}

TEST(NpTest, RangeDeterminismAndErrors) {
  ts::RngStream rng(50);
  const auto tree = ts::generate(80, ts::ModelKind::Yule, rng);
  const auto a = ts::np_test(tree, ts::ModelKind::Yule, 1000, 8, 1);
  const auto b = ts::np_test(tree, ts::ModelKind::Yule, 1000, 8, 3);
  EXPECT_GT(a.p_value, 0.0);
  EXPECT_LE(a.p_value, 1.0);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_GE(a.p_value, 1.0 / 1001.0);
  EXPECT_THROW(ts::np_test(ts::comb(2), ts::ModelKind::Yule, 10, 1), std::invalid_argument);
  EXPECT_THROW(ts::np_test(tree, ts::ModelKind::Catalan, 10, 1), std::invalid_argument);
}

TEST(NpTest, DetectsUniformTreesAgainstYule) {
  int rejected = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    ts::RngStream rng(600, {t});
    const auto tree = ts::generate(500, ts::ModelKind::Uniform, rng);
    rejected += ts::np_test(tree, ts::ModelKind::Yule, 500, 1000 + t).p_value < 0.05;
  }
  EXPECT_GE(rejected, 15);
}

TEST(KsTest, MatchesReferenceValues) {
  const auto a = ts::ks_test_uniform({0.05, 0.1, 0.12, 0.3, 0.33, 0.5, 0.61, 0.7, 0.9, 0.97});
  EXPECT_NEAR(a.statistic, 0.18, 1e-12);
  EXPECT_NEAR(a.p_value, 0.8681368124934209, 1e-9);

  std::vector<double> b;
  for (int i = 0; i < 200; ++i) b.push_back((i + 1) / 200.0 - 0.05);
  const auto rb = ts::ks_test_uniform(b);
  EXPECT_NEAR(rb.statistic, 0.05, 1e-12);
  EXPECT_NEAR(rb.p_value, 0.6886673872769066, 1e-9);

  std::vector<double> c;
  for (int i = 0; i < 50; ++i) c.push_back(0.001 + i * (0.399 / 49));
  EXPECT_LT(ts::ks_test_uniform(c).p_value, 1e-12);
  EXPECT_THROW(ts::ks_test_uniform({}), std::invalid_argument);
}
