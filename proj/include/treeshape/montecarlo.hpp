#pragma once

#include "treeshape/exact.hpp"
#include "treeshape/limits.hpp"
#include "treeshape/models.hpp"
#include "treeshape/rng.hpp"
#include "treeshape/statistics.hpp"
#include "treeshape/tree.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace treeshape {

// Stream tags keep the substreams of different campaigns apart.
enum class StreamTag : std::uint64_t { Moments = 1, NullTest = 2, Limit = 3, Airy = 4, Generate = 5 };

inline RngStream replication_stream(std::uint64_t seed, StreamTag tag, std::uint64_t n,
                                    std::uint64_t rep) {
  return RngStream(seed, {static_cast<std::uint64_t>(tag), n, rep});
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. Work is handed
// out in fixed-size blocks; results must be written by index so the outcome
// does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  constexpr std::size_t block = 64;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto body = [&] {
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(block);
        if (begin >= count || failed.load()) return;
        const std::size_t end = std::min(count, begin + block);
        for (std::size_t i = begin; i < end; ++i) fn(i);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Sample moments of paired observations with standard errors. Two-pass
// (mean, then centered sums) in index order.
struct PairedMoments {
  std::size_t count = 0;
  double mean_x = 0, mean_y = 0;
  double var_x = 0, var_y = 0, cov = 0, cor = 0;
  double se_mean_x = 0, se_mean_y = 0;
  double se_var_x = 0, se_var_y = 0, se_cov = 0, se_cor = 0;
};

inline PairedMoments paired_moments(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("paired_moments: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("paired_moments: need at least 2 observations");
  const std::size_t n = x.size();
  const double nd = static_cast<double>(n);
  PairedMoments m;
  m.count = n;
  for (std::size_t i = 0; i < n; ++i) {
    m.mean_x += x[i];
    m.mean_y += y[i];
  }
  m.mean_x /= nd;
  m.mean_y /= nd;
  double sxx = 0, syy = 0, sxy = 0, qxx = 0, qyy = 0, qxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - m.mean_x, dy = y[i] - m.mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
    qxx += dx * dx * dx * dx;
    qyy += dy * dy * dy * dy;
    qxy += dx * dx * dy * dy;
  }
  m.var_x = sxx / (nd - 1);
  m.var_y = syy / (nd - 1);
  m.cov = sxy / (nd - 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.cor = (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : nan;
  m.se_mean_x = std::sqrt(m.var_x / nd);
  m.se_mean_y = std::sqrt(m.var_y / nd);
  const double px = sxx / nd, py = syy / nd, pxy = sxy / nd;
  m.se_var_x = std::sqrt(std::max(0.0, qxx / nd - px * px) / nd);
  m.se_var_y = std::sqrt(std::max(0.0, qyy / nd - py * py) / nd);
  m.se_cov = std::sqrt(std::max(0.0, qxy / nd - pxy * pxy) / nd);
  m.se_cor = std::isnan(m.cor) ? nan : (1.0 - m.cor * m.cor) / std::sqrt(nd - 1.0);
  return m;
}

inline double mean_of(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double stderr_of_mean(std::span<const double> v) {
  const double mu = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - mu) * (x - mu);
  const double nd = static_cast<double>(v.size());
  return std::sqrt(ss / (nd - 1.0) / nd);
}

// Normalized statistics: (S - E[S])/n, (C - E[C])/n under Yule;
// S/n^{3/2}, C/n^{3/2} under the uniform model. mean_gap is the mean of
// (S - C)/n^{3/2} for either model.
struct MomentsReport {
  ModelKind model = ModelKind::Yule;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double mean_s = 0, mean_c = 0;
  double var_s = 0, var_c = 0, cov = 0, cor = 0;
  double se_mean_s = 0, se_mean_c = 0;
  double se_var_s = 0, se_var_c = 0, se_cov = 0, se_cor = 0;
  double mean_gap = 0, se_mean_gap = 0;
  std::size_t trees_checked = 0;
  double wall_seconds = 0;
};

// Every 1000th replication is also regenerated as a full tree from the same
// stream and its statistics compared with the streamed ones.
inline constexpr std::size_t kTreeCheckStride = 1000;

inline MomentsReport estimate_moments(ModelKind model, std::size_t n, std::size_t reps,
                                      unsigned workers, std::uint64_t seed) {
  if (!is_tree_model(model)) throw std::invalid_argument("estimate_moments: tree model required");
  if (n < 2) throw std::invalid_argument("estimate_moments: n must be >= 2");
  if (reps < 2) throw std::invalid_argument("estimate_moments: reps must be >= 2");
  const auto t0 = std::chrono::steady_clock::now();

  const double nd = static_cast<double>(n);
  const double n32 = nd * std::sqrt(nd);
  const bool yule = model == ModelKind::Yule;
  const double mean_s = yule ? mean_sackin_yule_value(n) : 0.0;
  const double mean_c = yule ? mean_colless_yule_value(n) : 0.0;
  const double scale = yule ? nd : n32;

  std::vector<double> xs(reps), ys(reps), gaps(reps);
  std::vector<std::uint8_t> checked(reps, 0);
  parallel_for(reps, workers, [&](std::size_t r) {
    RngStream rng = replication_stream(seed, StreamTag::Moments, n, r);
    const SplitStats st = sample_split_stats(n, model, rng, false);
    if (st.colless != st.sackin - 2 * st.min_split_sum)
      throw std::logic_error("estimate_moments: colless identity violated");
    if (r % kTreeCheckStride == 0) {
      RngStream again = replication_stream(seed, StreamTag::Moments, n, r);
      const PhyloTree tree = generate(n, model, again);
      if (sackin(tree) != st.sackin || colless(tree) != st.colless ||
          min_split_sum(tree) != st.min_split_sum)
        throw std::logic_error("estimate_moments: streamed statistics disagree with tree");
      checked[r] = 1;
    }
    xs[r] = (static_cast<double>(st.sackin) - mean_s) / scale;
    ys[r] = (static_cast<double>(st.colless) - mean_c) / scale;
    gaps[r] = static_cast<double>(st.sackin - st.colless) / n32;
  });

  const PairedMoments pm = paired_moments(xs, ys);
  MomentsReport rep;
  rep.model = model;
  rep.n = n;
  rep.reps = reps;
  rep.seed = seed;
  rep.workers = std::max(1u, workers);
  rep.mean_s = pm.mean_x;
  rep.mean_c = pm.mean_y;
  rep.var_s = pm.var_x;
  rep.var_c = pm.var_y;
  rep.cov = pm.cov;
  rep.cor = pm.cor;
  rep.se_mean_s = pm.se_mean_x;
  rep.se_mean_c = pm.se_mean_y;
  rep.se_var_s = pm.se_var_x;
  rep.se_var_c = pm.se_var_y;
  rep.se_cov = pm.se_cov;
  rep.se_cor = pm.se_cor;
  rep.mean_gap = mean_of(gaps);
  rep.se_mean_gap = stderr_of_mean(gaps);
  rep.trees_checked = static_cast<std::size_t>(std::count(checked.begin(), checked.end(), 1));
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Limiting values of the normalized quantities reported above.
struct LimitColumns {
  double mean_s, var_s, var_c, cov, cor;
};

inline LimitColumns limit_columns(ModelKind model) {
  if (model == ModelKind::Yule) {
    const auto lm = limit_moments_yule();
    return {0.0, lm.var_s, lm.var_c, lm.cov_sc, lm.cor_sc};
  }
  const double v = airy_variance();
  return {kAiryMean, v, v, v, 1.0};
}

struct ConvergenceRow {
  MomentsReport report;
  LimitColumns limit;
};

// One report per n; `progress` (optional) is told each n before it runs.
inline std::vector<ConvergenceRow> convergence_table(
    ModelKind model, std::span<const std::size_t> n_list, std::size_t reps, std::uint64_t seed,
    unsigned workers = 1, const std::function<void(std::size_t)>& progress = {}) {
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end())
    throw std::invalid_argument("convergence_table: n_list must be strictly ascending");
  std::vector<ConvergenceRow> rows;
  for (std::size_t n : n_list) {
    if (progress) progress(n);
    rows.push_back({estimate_moments(model, n, reps, workers, seed), limit_columns(model)});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// F_n balance test.

enum class Tail { Upper, Lower };

struct TestReport {
  double observed = 0;
  ModelKind null_model = ModelKind::Yule;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  Tail tail = Tail::Upper;
  std::size_t extreme_count = 0;
  double p_value = 1;
};

// Monte Carlo calibrated test on F_n. Uniform trees are less balanced than
// Yule trees and have larger F_n, so the Yule null uses the upper tail and
// the uniform null the lower tail. p = (1 + #{null draws at least as
// extreme}) / (reps + 1).
inline TestReport np_test(const PhyloTree& tree, ModelKind null_model, std::size_t reps,
                          std::uint64_t seed, unsigned workers = 1) {
  if (!is_tree_model(null_model)) throw std::invalid_argument("np_test: tree model required");
  const std::size_t n = tree.leaf_count();
  if (n < 3) throw std::invalid_argument("np_test: tree needs n >= 3");
  if (reps < 1) throw std::invalid_argument("np_test: reps must be >= 1");
  TestReport rep;
  rep.observed = f_stat(tree);
  rep.null_model = null_model;
  rep.n = n;
  rep.reps = reps;
  rep.seed = seed;
  rep.tail = null_model == ModelKind::Yule ? Tail::Upper : Tail::Lower;

  // F values are sums of logs accumulated in different orders; treat values
  // within a few ulps of the observation as ties.
  const double tol = 1e-9 * std::max(1.0, std::abs(rep.observed));
  std::vector<std::uint8_t> extreme(reps, 0);
  parallel_for(reps, workers, [&](std::size_t r) {
    RngStream rng = replication_stream(seed, StreamTag::NullTest, n, r);
    const double f = sample_split_stats(n, null_model, rng, true).f_stat;
    extreme[r] = rep.tail == Tail::Upper ? f >= rep.observed - tol : f <= rep.observed + tol;
  });
  rep.extreme_count = static_cast<std::size_t>(std::count(extreme.begin(), extreme.end(), 1));
  rep.p_value = static_cast<double>(1 + rep.extreme_count) / static_cast<double>(reps + 1);
  return rep;
}

struct KsResult {
  double statistic;
  double p_value;
};

// One-sample Kolmogorov-Smirnov test against U(0, 1), asymptotic p-value
// with the Stephens small-sample adjustment.
inline KsResult ks_test_uniform(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ks_test_uniform: empty sample");
  std::sort(values.begin(), values.end());
  const double nd = static_cast<double>(values.size());
  double d = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::clamp(values[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / nd - v, v - static_cast<double>(i) / nd});
  }
  const double root = std::sqrt(nd);
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  double p = 0;
  if (lambda < 0.2) {
    p = 1.0;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
      p += term;
      if (std::abs(term) < 1e-12) break;
      sign = -sign;
    }
    p = std::clamp(2.0 * p, 0.0, 1.0);
  }
  return {d, p};
}

}  // namespace treeshape
