#include "treeshape/exact.hpp"
#include "treeshape/limits.hpp"
#include "treeshape/montecarlo.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace ts = treeshape;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

// Integral over [0, 1] split at 1/2, where the tolls have a kink.
template <typename F>
double integrate01(F f) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 0.5, 15, 1e-13) +
         gauss_kronrod<double, 61>::integrate(f, 0.5, 1.0, 15, 1e-13);
}

struct Sample {
  std::vector<double> s, c;
};

Sample limit_sample(int depth, std::size_t count, std::uint64_t seed) {
  Sample out;
  for (std::size_t i = 0; i < count; ++i) {
    ts::RngStream rng(seed, {static_cast<std::uint64_t>(depth), i});
    const auto p = ts::sample_limit_pair(depth, rng);
    out.s.push_back(p.s);
    out.c.push_back(p.c);
  }
  return out;
}

}  // namespace

TEST(LimitMoments, Constants) {
  const auto m = ts::limit_moments_yule();
  EXPECT_NEAR(m.var_s, 7 - 2 * kPi * kPi / 3, 1e-15);
  EXPECT_NEAR(m.var_s, 0.420264, 1e-6);
  EXPECT_NEAR(m.var_c, 0.661919, 1e-6);
  EXPECT_NEAR(m.cov_sc, 4.5 - kPi * kPi / 3 - kLn2, 1e-15);
  EXPECT_NEAR(m.cor_sc, m.cov_sc / std::sqrt(m.var_s * m.var_c), 1e-14);
  EXPECT_NEAR(m.cor_sc, 0.98, 0.005);
}

TEST(TollVector, Values) {
  const auto half = ts::toll_vector(0.5);
  EXPECT_NEAR(half.b_s, 1 - 2 * kLn2, 1e-15);
  EXPECT_NEAR(half.b_c, -kLn2, 1e-15);
  const auto zero = ts::toll_vector(0.0);
  EXPECT_EQ(zero.b_s, 1.0);
  EXPECT_EQ(zero.b_c, 1.0);
  const auto tiny = ts::toll_vector(1e-12);
  EXPECT_NEAR(tiny.b_s, 1.0, 1e-9);
  EXPECT_NEAR(tiny.b_c, 1.0, 1e-9);
  EXPECT_THROW(ts::toll_vector(-0.1), std::domain_error);
  EXPECT_THROW(ts::toll_vector(1.5), std::domain_error);
  EXPECT_THROW(ts::toll_vector(std::nan("")), std::domain_error);
}

TEST(TollVector, CenteredByMonteCarlo) {
  ts::RngStream rng(2718);
  std::vector<double> bs, bc;
  for (int i = 0; i < 1000000; ++i) {
    const auto t = ts::toll_vector(rng.uniform01());
    bs.push_back(t.b_s);
    bc.push_back(t.b_c);
  }
  EXPECT_NEAR(ts::mean_of(bs), 0.0, 3 * ts::stderr_of_mean(bs));
  EXPECT_NEAR(ts::mean_of(bc), 0.0, 3 * ts::stderr_of_mean(bc));
}

TEST(TollVector, SecondMomentsByQuadrature) {
  // A fixed point with E[U^2 + (1-U)^2] = 2/3 has v = (2/3) v + E[b b'].
  const auto m = ts::limit_moments_yule();
  const double ess = integrate01([](double u) { return std::pow(ts::toll_vector(u).b_s, 2); });
  const double ecc = integrate01([](double u) { return std::pow(ts::toll_vector(u).b_c, 2); });
  const double esc = integrate01([](double u) {
    const auto t = ts::toll_vector(u);
    return t.b_s * t.b_c;
  });
  EXPECT_NEAR(ess, m.var_s / 3, 1e-10);
  EXPECT_NEAR(ecc, m.var_c / 3, 1e-10);
  EXPECT_NEAR(esc, m.cov_sc / 3, 1e-10);
  EXPECT_NEAR(integrate01([](double u) { return ts::toll_vector(u).b_c; }), 0.0, 1e-12);
}

TEST(LimitPair, BaseCaseAndLimits) {
  ts::RngStream rng(1);
  const auto p = ts::sample_limit_pair(0, rng);
  EXPECT_EQ(p.s, 0.0);
  EXPECT_EQ(p.c, 0.0);
  EXPECT_THROW(ts::sample_limit_pair(-1, rng), std::invalid_argument);
  EXPECT_THROW(ts::sample_limit_pair(ts::kMaxUnrollDepth + 1, rng), std::invalid_argument);
}

TEST(LimitPair, DepthMomentsFollowTheContraction) {
  // From the point mass, the depth-d law has mean 0 and second moments
  // (1 - (2/3)^d) times the fixed-point values.
  const int depth = 12;
  const auto smp = limit_sample(depth, 20000, 42);
  const auto pm = ts::paired_moments(smp.s, smp.c);
  const auto lm = ts::limit_moments_yule();
  const double shrink = 1 - std::pow(2.0 / 3.0, depth);
  EXPECT_NEAR(pm.mean_x, 0.0, 3 * pm.se_mean_x);
  EXPECT_NEAR(pm.mean_y, 0.0, 3 * pm.se_mean_y);
  EXPECT_NEAR(pm.var_x, lm.var_s * shrink, 4 * pm.se_var_x);
  EXPECT_NEAR(pm.var_y, lm.var_c * shrink, 4 * pm.se_var_y);
  EXPECT_NEAR(pm.cov, lm.cov_sc * shrink, 4 * pm.se_cov);
  EXPECT_NEAR(pm.cor, 0.9817, 0.01);
}

TEST(LimitPair, OneMoreLevelIsStationary) {
  const auto smp = limit_sample(12, 20000, 43);
  std::vector<ts::LimitPair> pairs;
  for (std::size_t i = 0; i < smp.s.size(); ++i) pairs.push_back({smp.s[i], smp.c[i]});
  ts::RngStream rng(44);
  const auto mapped = ts::apply_fixed_point_map(pairs, rng);
  ASSERT_EQ(mapped.size(), pairs.size() / 2);
  std::vector<double> ms, mc;
  for (const auto& p : mapped) {
    ms.push_back(p.s);
    mc.push_back(p.c);
  }
  const auto before = ts::paired_moments(smp.s, smp.c);
  const auto after = ts::paired_moments(ms, mc);
  auto combined = [](double a, double b) { return 3 * std::hypot(a, b); };
  EXPECT_NEAR(after.mean_x, before.mean_x, combined(after.se_mean_x, before.se_mean_x));
  EXPECT_NEAR(after.var_x, before.var_x, combined(after.se_var_x, before.se_var_x));
  EXPECT_NEAR(after.var_y, before.var_y, combined(after.se_var_y, before.se_var_y));
  EXPECT_NEAR(after.cov, before.cov, combined(after.se_cov, before.se_cov));
}

TEST(ViaN, CenteredAndScaled) {
  const ts::ViaNSampler via(300);
  EXPECT_EQ(via.n(), 300u);
  std::vector<double> s, c;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    ts::RngStream rng(5, {i});
    const auto p = via(rng);
    s.push_back(p.s);
    c.push_back(p.c);
  }
  const auto pm = ts::paired_moments(s, c);
  EXPECT_NEAR(pm.mean_x, 0.0, 3 * pm.se_mean_x);
  EXPECT_NEAR(pm.mean_y, 0.0, 3 * pm.se_mean_y);
  // Exact finite-n Sackin variance, 7 - 4 H2_n - 2 H_n / n - 1 / n after scaling.
  double h = 0, h2 = 0;
  for (int j = 1; j <= 300; ++j) {
    h += 1.0 / j;
    h2 += 1.0 / (double(j) * j);
  }
  EXPECT_NEAR(pm.var_x, 7 - 4 * h2 - 2 * h / 300 - 1.0 / 300, 4 * pm.se_var_x);
  EXPECT_THROW(ts::ViaNSampler(1), std::invalid_argument);
}

TEST(Airy, Moments) {
  EXPECT_NEAR(ts::airy_moment(1), 1.772454, 1e-6);
  EXPECT_NEAR(ts::airy_moment(1), ts::kAiryMean, 1e-15);
  EXPECT_NEAR(ts::airy_moment(2), 10.0 / 3.0, 1e-14);
  EXPECT_NEAR(ts::airy_variance(), 0.191741, 1e-6);
  EXPECT_THROW(ts::airy_moment(3), std::domain_error);
  EXPECT_THROW(ts::airy_moment(0), std::domain_error);
}

TEST(Airy, ExcursionPathsAreValid) {
  for (std::size_t m : {2u, 4u, 64u, 1000u}) {
    for (std::uint64_t r = 0; r < 50; ++r) {
      ts::RngStream rng(9, {m, r});
      const auto path = ts::sample_excursion_path(m, rng);
      ASSERT_EQ(path.steps, m);
      ASSERT_EQ(path.heights.size(), m + 1);
      EXPECT_EQ(path.heights.front(), 0.0);
      EXPECT_EQ(path.heights.back(), 0.0);
      for (double h : path.heights) ASSERT_GE(h, 0.0);
    }
  }
  ts::RngStream rng(1);
  EXPECT_THROW(ts::sample_excursion_path(3, rng), std::invalid_argument);
  EXPECT_THROW(ts::sample_excursion_path(0, rng), std::invalid_argument);
}

TEST(Airy, ExcursionReproducible) {
  ts::RngStream a(123, {7}), b(123, {7});
  EXPECT_EQ(ts::sample_airy_excursion(4096, a), ts::sample_airy_excursion(4096, b));
}

TEST(Airy, GridShift) {
  // -zeta(1/2) / sqrt(2 pi) with zeta(1/2) = -1.4603545088...
  EXPECT_NEAR(ts::grid_minimum_shift(), 1.4603545088095868 / std::sqrt(2 * kPi), 1e-12);
  ts::RngStream rng(3);
  const auto path = ts::sample_excursion_path(256, rng);
  EXPECT_NEAR(ts::airy_from_path(path, true) - ts::airy_from_path(path, false),
              std::sqrt(8.0) * ts::grid_minimum_shift() / 16.0, 1e-12);
}

TEST(Airy, ExcursionMeanAtModerateGrid) {
  std::vector<double> v;
  for (std::uint64_t r = 0; r < 20000; ++r) {
    ts::RngStream rng(77, {r});
    v.push_back(ts::sample_airy_excursion(1024, rng));
  }
  EXPECT_NEAR(ts::mean_of(v), ts::kAiryMean, 4 * ts::stderr_of_mean(v));
}

TEST(Dyck, SmallPaths) {
  ts::RngStream rng(2);
  EXPECT_EQ(ts::sample_dyck_heights(1, rng), (std::vector<std::int32_t>{0, 1, 0}));
  EXPECT_EQ(ts::sample_airy_dyck(1, rng), 4.0);
  EXPECT_THROW(ts::sample_dyck_heights(0, rng), std::invalid_argument);

  // All C_3 = 5 paths with equal frequency.
  std::map<std::vector<std::int32_t>, int> hits;
  const int draws = 50000;
  for (int r = 0; r < draws; ++r) ++hits[ts::sample_dyck_heights(3, rng)];
  ASSERT_EQ(hits.size(), 5u);
  const double sd = std::sqrt(0.2 * 0.8 / draws);
  for (const auto& [path, count] : hits) {
    EXPECT_EQ(path.front(), 0);
    EXPECT_EQ(path.back(), 0);
    EXPECT_NEAR(count / double(draws), 0.2, 4 * sd);
  }
}

TEST(Dyck, PathsAreValidAndMeanIsExact) {
  const std::size_t m = 50;
  std::vector<double> v;
  for (std::uint64_t r = 0; r < 20000; ++r) {
    ts::RngStream rng(12, {r});
    const auto h = ts::sample_dyck_heights(m, rng);
    ASSERT_EQ(h.size(), 2 * m + 1);
    ASSERT_EQ(h.back(), 0);
    for (std::size_t i = 1; i < h.size(); ++i) ASSERT_EQ(std::abs(h[i] - h[i - 1]), 1);
    for (auto x : h) ASSERT_GE(x, 0);
    ts::RngStream again(12, {r});
    v.push_back(ts::sample_airy_dyck(m, again));
  }
  // E[sum (h_i + 1)] over uniform Dyck paths of length 2m is 4^m / C_m.
  const double expected =
      std::exp(m * std::log(4.0) - ts::log_catalan(double(m))) / std::pow(double(m), 1.5);
  EXPECT_NEAR(ts::mean_of(v), expected, 4 * ts::stderr_of_mean(v));
}
