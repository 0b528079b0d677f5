#pragma once

#include "treeshape/exact.hpp"
#include "treeshape/models.hpp"
#include "treeshape/rng.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace treeshape {

// Second moments of the Yule fixed-point law (S, C).
struct LimitMomentsYule {
  double var_s;
  double var_c;
  double cov_sc;
  double cor_sc;
};

inline LimitMomentsYule limit_moments_yule() {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  constexpr double ln2 = std::numbers::ln2;
  LimitMomentsYule m{};
  m.var_s = 7.0 - 2.0 * pi2 / 3.0;
  m.var_c = 3.0 - pi2 / 6.0 - ln2;
  m.cov_sc = 4.5 - pi2 / 3.0 - ln2;
  m.cor_sc = (27.0 - 2.0 * pi2 - 6.0 * ln2) /
             std::sqrt(2.0 * (18.0 - pi2 - 6.0 * ln2) * (21.0 - 2.0 * pi2));
  return m;
}

struct TollVector {
  double b_s;
  double b_c;
};

namespace detail {
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
}  // namespace detail

// b_s(u) = 2u ln u + 2(1-u) ln(1-u) + 1
// b_c(u) = u ln u + (1-u) ln(1-u) + 1 - 2 min(u, 1-u)
inline TollVector toll_vector(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("toll_vector: u must lie in [0, 1]");
  const double ent = detail::xlogx(u) + detail::xlogx(1.0 - u);
  return {2.0 * ent + 1.0, ent + 1.0 - 2.0 * std::min(u, 1.0 - u)};
}

struct LimitPair {
  double s = 0.0;
  double c = 0.0;
};

inline constexpr int kMaxUnrollDepth = 22;

// Exact unrolling of the fixed-point map from the point mass at (0, 0):
// depth d costs 2^d - 1 uniform draws.
inline LimitPair sample_limit_pair(int depth, RngStream& rng) {
  if (depth < 0) throw std::invalid_argument("sample_limit_pair: depth must be >= 0");
  if (depth > kMaxUnrollDepth)
    throw std::invalid_argument("sample_limit_pair: depth above " +
                                std::to_string(kMaxUnrollDepth) + "; use via-n sampling");
  if (depth == 0) return {};
  const double u = rng.uniform01();
  const LimitPair a = sample_limit_pair(depth - 1, rng);
  const LimitPair b = sample_limit_pair(depth - 1, rng);
  const TollVector t = toll_vector(u);
  return {u * a.s + (1.0 - u) * b.s + t.b_s, u * a.c + (1.0 - u) * b.c + t.b_c};
}

// Centered, scaled (S_N, C_N) of a Yule tree with N leaves; converges to the
// fixed-point law as N grows. Centering uses the exact mean formulas.
class ViaNSampler {
 public:
  explicit ViaNSampler(std::size_t n)
      : n_(n), mean_s_(mean_sackin_yule_value(n)), mean_c_(mean_colless_yule_value(n)) {
    if (n < 2) throw std::invalid_argument("ViaNSampler: n must be >= 2");
  }

  std::size_t n() const { return n_; }

  LimitPair operator()(RngStream& rng) const {
    const SplitStats st = sample_split_stats(n_, ModelKind::Yule, rng, false);
    const double nd = static_cast<double>(n_);
    return {(static_cast<double>(st.sackin) - mean_s_) / nd,
            (static_cast<double>(st.colless) - mean_c_) / nd};
  }

 private:
  std::size_t n_;
  double mean_s_;
  double mean_c_;
};

// One application of the map to an empirical sample: consecutive pairs
// (2i, 2i+1) are combined with a fresh uniform and toll.
inline std::vector<LimitPair> apply_fixed_point_map(std::span<const LimitPair> sample,
                                                    RngStream& rng) {
  std::vector<LimitPair> out;
  out.reserve(sample.size() / 2);
  for (std::size_t i = 0; i + 1 < sample.size(); i += 2) {
    const double u = rng.uniform01();
    const TollVector t = toll_vector(u);
    out.push_back({u * sample[i].s + (1.0 - u) * sample[i + 1].s + t.b_s,
                   u * sample[i].c + (1.0 - u) * sample[i + 1].c + t.b_c});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Airy distribution, A = sqrt(8) * integral of the standard Brownian excursion.

inline constexpr double kAiryMean = 1.7724538509055160273;  // sqrt(pi)

inline double airy_variance() { return (10.0 - 3.0 * std::numbers::pi) / 3.0; }

// E[A^k] for k in {1, 2}; higher orders are not provided.
inline double airy_moment(int k) {
  switch (k) {
    case 1: return std::sqrt(std::numbers::pi);
    case 2: return airy_variance() + std::numbers::pi;
    default: throw std::domain_error("airy_moment: only orders 1 and 2 are available");
  }
}

// Discretized excursion on a grid of m steps; heights are already divided by
// sqrt(m), so heights[k] approximates e(k/m).
struct ExcursionPath {
  std::size_t steps = 0;
  std::vector<double> heights;
};

// Gaussian random-walk bridge (drift removed linearly), cyclically shifted to
// start at its first minimum.
inline ExcursionPath sample_excursion_path(std::size_t m, RngStream& rng) {
  if (m < 2 || m % 2 != 0)
    throw std::invalid_argument("sample_excursion_path: m must be even and >= 2");
  std::vector<double> walk(m + 1);
  walk[0] = 0.0;
  for (std::size_t k = 1; k <= m; ++k) walk[k] = walk[k - 1] + rng.normal();
  const double drift = walk[m] / static_cast<double>(m);
  std::size_t argmin = 0;
  for (std::size_t k = 0; k < m; ++k) {
    walk[k] -= drift * static_cast<double>(k);
    if (walk[k] < walk[argmin]) argmin = k;
  }
  walk[m] = 0.0;

  ExcursionPath path{m, std::vector<double>(m + 1)};
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  const double low = walk[argmin];
  for (std::size_t j = 0; j < m; ++j)
    path.heights[j] = (walk[(argmin + j) % m] - low) * scale;
  path.heights[m] = 0.0;
  return path;
}

// -zeta(1/2)/sqrt(2 pi): mean gap between the minimum of a Gaussian walk on
// the grid and that of its continuous limit, in units of one step.
inline double grid_minimum_shift() {
  return -boost::math::zeta(0.5) / std::sqrt(2.0 * std::numbers::pi);
}

// sqrt(8) * trapezoid area. With the grid correction the area is raised by
// grid_minimum_shift()/sqrt(m), removing the O(m^-1/2) bias of the discrete
// minimum.
inline double airy_from_path(const ExcursionPath& path, bool grid_correction = true) {
  double area = 0.0;
  for (std::size_t k = 1; k < path.steps; ++k) area += path.heights[k];
  area /= static_cast<double>(path.steps);
  if (grid_correction) area += grid_minimum_shift() / std::sqrt(static_cast<double>(path.steps));
  return std::sqrt(8.0) * area;
}

inline double sample_airy_excursion(std::size_t m, RngStream& rng, bool grid_correction = true) {
  return airy_from_path(sample_excursion_path(m, rng), grid_correction);
}

// Uniform Dyck path of 2m steps by the cycle lemma: a uniform arrangement of
// m up-steps and m+1 down-steps has exactly one rotation whose partial sums
// stay >= 0 until the final step to -1. Returns the 2m+1 heights.
inline std::vector<std::int32_t> sample_dyck_heights(std::size_t m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("sample_dyck_heights: m must be >= 1");
  const std::size_t len = 2 * m + 1;
  std::vector<std::int8_t> steps(len);
  std::size_t ups_left = m;
  for (std::size_t i = 0; i < len; ++i) {
    const bool up = static_cast<double>(len - i) * rng.uniform01() < static_cast<double>(ups_left);
    steps[i] = up ? 1 : -1;
    if (up) --ups_left;
  }
  // First index of the minimum of the partial sums P_0..P_{len-1}.
  std::int64_t level = 0, low = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < len; ++i) {
    level += steps[i];
    if (level < low && i + 1 < len) {
      low = level;
      start = i + 1;
    }
  }
  std::vector<std::int32_t> heights(len);
  std::int32_t h = 0;
  heights[0] = 0;
  for (std::size_t j = 1; j < len; ++j) {
    h += steps[(start + j - 1) % len];
    heights[j] = h;
  }
  return heights;
}

// Area between the path and the level -1 it is absorbed at, over m^{3/2}.
// Its mean is exactly 4^m / (C_m m^{3/2}) -> sqrt(pi).
inline double sample_airy_dyck(std::size_t m, RngStream& rng) {
  const auto heights = sample_dyck_heights(m, rng);
  std::int64_t area = 0;
  for (auto h : heights) area += h + 1;
  const double md = static_cast<double>(m);
  return static_cast<double>(area) / (md * std::sqrt(md));
}

}  // namespace treeshape
