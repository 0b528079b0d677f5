#pragma once

#include "treeshape/errors.hpp"
#include "treeshape/models.hpp"
#include "treeshape/rational.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace treeshape {

inline constexpr std::size_t kDefaultJointPmfCap = 18;

// ---------------------------------------------------------------------------
// Means under the Yule model.

// E[S_n] = 2n sum_{j=2}^n 1/j.
inline Rational mean_sackin_yule(std::size_t n) {
  if (n < 1) throw std::invalid_argument("mean_sackin_yule: n must be >= 1");
  Rational h = 0;
  for (std::size_t j = 2; j <= n; ++j) h += Rational(1, j);
  return 2 * Rational(n) * h;
}

// Same formula in long double, for n far beyond what rationals allow.
inline double mean_sackin_yule_value(std::size_t n) {
  if (n < 1) throw std::invalid_argument("mean_sackin_yule_value: n must be >= 1");
  long double h = 0;
  for (std::size_t j = n; j >= 2; --j) h += 1.0L / static_cast<long double>(j);
  return static_cast<double>(2.0L * static_cast<long double>(n) * h);
}

// E[min(I, n-1-I)] for I uniform on {0, ..., n-1}.
inline Rational t_min(std::size_t n) {
  if (n < 1) throw std::invalid_argument("t_min: n must be >= 1");
  if (n % 2 == 0) return Rational(n - 2, 4);
  return Rational((n - 1) * (n - 1), 4 * n);
}

// Mean Colless value of a random-permutation shape with m vertices:
//   c_m = (m-1-2t_m) + 2(m+1) sum_{k=1}^{m-1} (k-1-2t_k) / ((k+1)(k+2)).
inline Rational shape_mean_colless(std::size_t m) {
  if (m == 0) return 0;
  Rational sum = 0;
  for (std::size_t k = 1; k < m; ++k)
    sum += (Rational(k) - 1 - 2 * t_min(k)) / Rational((k + 1) * (k + 2));
  return (Rational(m) - 1 - 2 * t_min(m)) + 2 * Rational(m + 1) * sum;
}

// E[C_n] under Yule; a tree with n leaves has the law of a shape with n-1
// vertices.
inline Rational mean_colless_yule(std::size_t n) {
  if (n < 1) throw std::invalid_argument("mean_colless_yule: n must be >= 1");
  return shape_mean_colless(n - 1);
}

inline double mean_colless_yule_value(std::size_t n) {
  if (n < 1) throw std::invalid_argument("mean_colless_yule_value: n must be >= 1");
  const std::size_t m = n - 1;
  if (m == 0) return 0.0;
  auto t = [](std::size_t k) -> long double {
    const long double kd = static_cast<long double>(k);
    return k % 2 == 0 ? (kd - 2) / 4 : (kd - 1) * (kd - 1) / (4 * kd);
  };
  long double sum = 0;
  for (std::size_t k = 1; k < m; ++k) {
    const long double kd = static_cast<long double>(k);
    sum += (kd - 1 - 2 * t(k)) / ((kd + 1) * (kd + 2));
  }
  const long double md = static_cast<long double>(m);
  return static_cast<double>((md - 1 - 2 * t(m)) + 2 * (md + 1) * sum);
}

// ---------------------------------------------------------------------------
// Joint law of (S_n, C_n).

using StatPair = std::pair<std::int64_t, std::int64_t>;

struct JointPMF {
  std::size_t n = 0;
  ModelKind model = ModelKind::Yule;
  std::map<StatPair, Rational> mass;

  Rational total() const {
    Rational t = 0;
    for (const auto& [k, p] : mass) t += p;
    return t;
  }
};

namespace detail {

struct CountTable {
  std::vector<std::pair<StatPair, BigInt>> counts;
  BigInt denominator;
};

}  // namespace detail

// Law of (internal path length, Colless) of a search-tree shape on m
// vertices, m <= cap. Both coordinates are driven by the same root split:
// toll (m - 1, |I - J|). Probabilities are kept as integer counts over a
// per-size denominator: m! for random permutations (split weight
// binom(m-1, i)), C_m for Catalan shapes (weight 1).
inline JointPMF shape_joint_pmf(std::size_t m, ModelKind shape_model,
                                std::size_t cap = kDefaultJointPmfCap - 1) {
  if (shape_model != ModelKind::RandomPermutation && shape_model != ModelKind::Catalan)
    throw std::invalid_argument("shape_joint_pmf: shape model required");
  if (m > cap) throw cap_exceeded("shape_joint_pmf: m = " + std::to_string(m), cap);
  const bool perm = shape_model == ModelKind::RandomPermutation;

  std::vector<detail::CountTable> table(m + 1);
  table[0] = {{{{0, 0}, BigInt(1)}}, BigInt(1)};
  for (std::size_t k = 1; k <= m; ++k) {
    std::map<StatPair, BigInt> acc;
    BigInt total = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = k - 1 - i;
      const BigInt w = perm ? binomial(static_cast<unsigned>(k - 1), static_cast<unsigned>(i))
                            : BigInt(1);
      const auto toll_s = static_cast<std::int64_t>(k - 1);
      const auto toll_c = static_cast<std::int64_t>(i > j ? i - j : j - i);
      for (const auto& [a, ca] : table[i].counts) {
        const BigInt wa = w * ca;
        for (const auto& [b, cb] : table[j].counts)
          acc[{a.first + b.first + toll_s, a.second + b.second + toll_c}] += wa * cb;
      }
      total += w * table[i].denominator * table[j].denominator;
    }
    table[k].counts.assign(acc.begin(), acc.end());
    table[k].denominator = std::move(total);
  }

  JointPMF pmf{m, shape_model, {}};
  for (const auto& [key, c] : table[m].counts) pmf.mass[key] = Rational(c, table[m].denominator);
  return pmf;
}

// Law of (S_n, C_n) for a tree with n leaves, via the shape law on n - 1
// vertices: S_n = S^_{n-1} + 2(n-1), C_n = C^_{n-1}.
inline JointPMF joint_pmf(std::size_t n, ModelKind model, std::size_t cap = kDefaultJointPmfCap) {
  if (!is_tree_model(model)) throw std::invalid_argument("joint_pmf: tree model required");
  if (n < 1) throw std::invalid_argument("joint_pmf: n must be >= 1");
  if (n > cap) throw cap_exceeded("joint_pmf: n = " + std::to_string(n), cap);
  const JointPMF shape = shape_joint_pmf(n - 1, shape_counterpart(model), cap);
  JointPMF pmf{n, model, {}};
  const auto shift = static_cast<std::int64_t>(2 * (n - 1));
  for (const auto& [key, p] : shape.mass) pmf.mass[{key.first + shift, key.second}] = p;
  return pmf;
}

struct ExactMoments {
  Rational mean_s, mean_c, var_s, var_c, cov_sc;
};

inline ExactMoments exact_moments(const JointPMF& pmf) {
  Rational es = 0, ec = 0, ess = 0, ecc = 0, esc = 0;
  for (const auto& [key, p] : pmf.mass) {
    const Rational s(key.first), c(key.second);
    es += p * s;
    ec += p * c;
    ess += p * s * s;
    ecc += p * c * c;
    esc += p * s * c;
  }
  return {es, ec, ess - es * es, ecc - ec * ec, esc - es * ec};
}

// ---------------------------------------------------------------------------
// Subtree-size laws.

using ExactPmf = std::map<std::int64_t, Rational>;

// Vertex count below a uniformly chosen vertex of an n-vertex Catalan shape:
//   P(K^ = k) = C_k binom(2n-2k, n-k) / (n C_n),  k = 1..n.
inline ExactPmf khat_pmf(std::size_t n) {
  if (n < 1) throw std::invalid_argument("khat_pmf: n must be >= 1");
  const auto nn = static_cast<unsigned>(n);
  const BigInt denom = BigInt(nn) * catalan_number(nn);
  ExactPmf pmf;
  for (unsigned k = 1; k <= nn; ++k)
    pmf[k] = Rational(catalan_number(k) * binomial(2 * (nn - k), nn - k), denom);
  return pmf;
}

// Leaf count below a uniformly chosen internal node of a uniform tree:
//   P(K = k) = C_{k-1} binom(2n-2k, n-k) / ((n-1) C_{n-1}),  k = 2..n.
inline ExactPmf k_pmf(std::size_t n) {
  if (n < 2) throw std::invalid_argument("k_pmf: n must be >= 2");
  const auto nn = static_cast<unsigned>(n);
  const BigInt denom = BigInt(nn - 1) * catalan_number(nn - 1);
  ExactPmf pmf;
  for (unsigned k = 2; k <= nn; ++k)
    pmf[k] = Rational(catalan_number(k - 1) * binomial(2 * (nn - k), nn - k), denom);
  return pmf;
}

// 4^-k C_k, the n -> infinity limit of khat_pmf at k.
inline Rational khat_limit_pmf(std::size_t k) {
  if (k < 1) throw std::invalid_argument("khat_limit_pmf: k must be >= 1");
  const auto kk = static_cast<unsigned>(k);
  return Rational(catalan_number(kk), BigInt(1) << (2 * kk));
}

inline double log_khat_pmf(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw std::invalid_argument("log_khat_pmf: need 1 <= k <= n");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return log_catalan(kd) + log_binomial(2.0 * (nd - kd), nd - kd) - std::log(nd) -
         log_catalan(nd);
}

inline double log_khat_limit_pmf(std::size_t k) {
  if (k < 1) throw std::invalid_argument("log_khat_limit_pmf: k must be >= 1");
  const double kd = static_cast<double>(k);
  return log_catalan(kd) - kd * std::log(4.0);
}

// E[min(L^, R^)] at the root of an n-vertex Catalan shape:
//   sum_{k=1}^{floor(n/2)-1} 2k C_k C_{n-1-k} / C_n
//     + [n odd] (n-1) C_{(n-1)/2}^2 / (2 C_n).
inline Rational expected_root_min_catalan(std::size_t n) {
  if (n < 2) throw std::invalid_argument("expected_root_min_catalan: n must be >= 2");
  const auto nn = static_cast<unsigned>(n);
  std::vector<BigInt> cat(nn + 1);
  cat[0] = 1;
  for (unsigned i = 0; i < nn; ++i) cat[i + 1] = cat[i] * (2 * (2 * i + 1)) / (i + 2);
  BigInt num = 0;
  for (unsigned k = 1; k + 1 <= nn / 2; ++k) num += 2 * k * cat[k] * cat[nn - 1 - k];
  Rational e(num, cat[nn]);
  if (nn % 2 == 1) {
    const unsigned h = (nn - 1) / 2;
    e += Rational((nn - 1) * cat[h] * cat[h], 2 * cat[nn]);
  }
  return e;
}

// Same sum evaluated in floating point from log-Catalan numbers.
inline double expected_root_min_catalan_value(std::size_t n) {
  if (n < 2) throw std::invalid_argument("expected_root_min_catalan_value: n must be >= 2");
  const double nd = static_cast<double>(n);
  const double lcn = log_catalan(nd);
  double e = 0.0;
  for (std::size_t k = 1; k + 1 <= n / 2; ++k) {
    const double kd = static_cast<double>(k);
    e += 2.0 * kd * std::exp(log_catalan(kd) + log_catalan(nd - 1.0 - kd) - lcn);
  }
  if (n % 2 == 1) {
    const double h = (nd - 1.0) / 2.0;
    e += (nd - 1.0) / 2.0 * std::exp(2.0 * log_catalan(h) - lcn);
  }
  return e;
}

// E[sum_j sqrt(N^_j)] over the vertices of an n-vertex Catalan shape,
// computed as n E[sqrt(K^_n)] from khat_pmf in log space.
inline double expected_sqrt_subtree_sum(std::size_t n) {
  if (n < 1) throw std::invalid_argument("expected_sqrt_subtree_sum: n must be >= 1");
  double acc = 0.0;
  for (std::size_t k = 1; k <= n; ++k)
    acc += std::sqrt(static_cast<double>(k)) * std::exp(log_khat_pmf(n, k));
  return static_cast<double>(n) * acc;
}

}  // namespace treeshape
