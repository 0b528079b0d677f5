#pragma once

#include "treeshape/rational.hpp"
#include "treeshape/rng.hpp"
#include "treeshape/tree.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treeshape {

// Yule and Uniform are models on phylogenetic trees; RandomPermutation and
// Catalan are their search-tree-shape counterparts under phi_map.
enum class ModelKind { Yule, Uniform, RandomPermutation, Catalan };

inline std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Yule: return "yule";
    case ModelKind::Uniform: return "uniform";
    case ModelKind::RandomPermutation: return "random-permutation";
    case ModelKind::Catalan: return "catalan";
  }
  return "?";
}

inline ModelKind parse_model(std::string_view name) {
  if (name == "yule") return ModelKind::Yule;
  if (name == "uniform") return ModelKind::Uniform;
  if (name == "random-permutation") return ModelKind::RandomPermutation;
  if (name == "catalan") return ModelKind::Catalan;
  throw std::invalid_argument("unknown model: " + std::string(name));
}

inline bool is_tree_model(ModelKind m) {
  return m == ModelKind::Yule || m == ModelKind::Uniform;
}

// Shape-form model that phi_map carries onto a tree model, and back.
inline ModelKind shape_counterpart(ModelKind m) {
  switch (m) {
    case ModelKind::Yule: return ModelKind::RandomPermutation;
    case ModelKind::Uniform: return ModelKind::Catalan;
    case ModelKind::RandomPermutation: return ModelKind::Yule;
    case ModelKind::Catalan: return ModelKind::Uniform;
  }
  return m;
}

inline BigInt catalan_number(unsigned k) {
  BigInt c = 1;
  for (unsigned i = 0; i < k; ++i) {
    c *= 2 * (2 * i + 1);
    c /= i + 2;
  }
  return c;
}

inline double log_catalan(double k) {
  return std::lgamma(2.0 * k + 1.0) - 2.0 * std::lgamma(k + 1.0) - std::log(k + 1.0);
}

// ln(4^k / sqrt(pi k^3)).
inline double log_catalan_asymptotic(unsigned k) {
  if (k == 0) throw std::invalid_argument("catalan_asymptotic: k must be >= 1");
  const double kd = k;
  return kd * std::log(4.0) - 0.5 * std::log(std::numbers::pi * kd * kd * kd);
}

// 4^k / sqrt(pi k^3); overflows to infinity beyond k of about 510, where the
// log form should be used.
inline double catalan_asymptotic(unsigned k) { return std::exp(log_catalan_asymptotic(k)); }

// (2m - 3)!!, the number of labeled trees with m leaves; (-1)!! = 1!! = 1.
inline BigInt double_factorial_odd(long m) {
  if (m < 1) throw std::invalid_argument("double_factorial_odd: m must be >= 1");
  BigInt p = 1;
  for (long f = 2 * m - 3; f > 1; f -= 2) p *= f;
  return p;
}

// Law of the left subtree size. Support starts at min_left: 1 for trees on n
// leaves ({1..n-1}), 0 for search-tree shapes on n vertices ({0..n-1}).
struct SplitDistribution {
  std::size_t n = 0;
  std::size_t min_left = 0;
  std::vector<Rational> probs;

  std::size_t max_left() const { return min_left + probs.size() - 1; }

  Rational prob(std::size_t i) const {
    if (i < min_left || i > max_left()) return 0;
    return probs[i - min_left];
  }
};

inline SplitDistribution yule_split(std::size_t n) {
  if (n < 2) throw std::invalid_argument("yule_split: n must be >= 2");
  return {n, 1, std::vector<Rational>(n - 1, Rational(1, n - 1))};
}

// q_n(i) = 1/2 binom(n,i) (2i-3)!! (2(n-i)-3)!! / (2n-3)!!
inline SplitDistribution uniform_split(std::size_t n) {
  if (n < 2) throw std::invalid_argument("uniform_split: n must be >= 2");
  const auto m = static_cast<unsigned>(n);
  const BigInt total = double_factorial_odd(m);
  SplitDistribution d{n, 1, {}};
  d.probs.reserve(n - 1);
  for (unsigned i = 1; i < m; ++i) {
    BigInt num = binomial(m, i) * double_factorial_odd(i) * double_factorial_odd(m - i);
    d.probs.emplace_back(num, 2 * total);
  }
  return d;
}

// Random-permutation shapes on n vertices: left size uniform on {0..n-1}.
inline SplitDistribution random_permutation_split(std::size_t n) {
  if (n < 1) throw std::invalid_argument("random_permutation_split: n must be >= 1");
  return {n, 0, std::vector<Rational>(n, Rational(1, n))};
}

// Catalan shapes on n vertices: q(i) = C_i C_{n-1-i} / C_n.
inline SplitDistribution catalan_split(std::size_t n) {
  if (n < 1) throw std::invalid_argument("catalan_split: n must be >= 1");
  const auto m = static_cast<unsigned>(n);
  const BigInt total = catalan_number(m);
  SplitDistribution d{n, 0, {}};
  d.probs.reserve(n);
  for (unsigned i = 0; i < m; ++i)
    d.probs.emplace_back(catalan_number(i) * catalan_number(m - 1 - i), total);
  return d;
}

inline SplitDistribution split_distribution(ModelKind model, std::size_t n) {
  switch (model) {
    case ModelKind::Yule: return yule_split(n);
    case ModelKind::Uniform: return uniform_split(n);
    case ModelKind::RandomPermutation: return random_permutation_split(n);
    case ModelKind::Catalan: return catalan_split(n);
  }
  throw std::invalid_argument("split_distribution: bad model");
}

// Draws the left leaf count of an n-leaf node (n >= 2) in floating point.
// Yule is a uniform integer. The uniform-model law is heavy at both ends, so
// the smaller side is found by a forward CDF scan from 1 using
//   q(k+1)/q(k) = (n-k)(2k-1) / ((k+1)(2n-2k-3)),  q(1) = n / (2(2n-3)),
// which costs O(min side) per draw and never forms the double factorials.
inline std::size_t sample_left_leaves(ModelKind model, std::size_t n, RngStream& rng) {
  if (model == ModelKind::Yule) return 1 + static_cast<std::size_t>(rng.uniform_index(n - 1));
  if (model != ModelKind::Uniform)
    throw std::invalid_argument("sample_left_leaves: tree model required");
  if (n == 2) return 1;
  const double nd = static_cast<double>(n);
  const double u = rng.uniform01();
  const bool flip = rng.coin();
  const std::size_t half = n / 2;
  double q = nd / (2.0 * (2.0 * nd - 3.0));
  double acc = 0.0;
  std::size_t k = 1;
  for (;; ++k) {
    acc += (2 * k == n) ? q : 2.0 * q;
    if (u < acc || k == half) break;
    const double kd = static_cast<double>(k);
    q *= (nd - kd) * (2.0 * kd - 1.0) / ((kd + 1.0) * (2.0 * nd - 2.0 * kd - 3.0));
  }
  return flip ? n - k : k;
}

// Markov branching generator: each node of size k >= 2 draws its left size
// independently from the model's split law. Nodes are expanded depth-first,
// left before right, one split draw per internal node.
inline PhyloTree generate(std::size_t n, ModelKind model, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
  if (!is_tree_model(model)) throw std::invalid_argument("generate: tree model required");
  std::vector<PhyloTree::Node> nodes(1);
  nodes.reserve(2 * n - 1);
  std::vector<std::pair<NodeRef, std::size_t>> stack{{0, n}};
  while (!stack.empty()) {
    auto [v, k] = stack.back();
    stack.pop_back();
    if (k == 1) continue;
    const std::size_t left = sample_left_leaves(model, k, rng);
    const auto l = static_cast<NodeRef>(nodes.size());
    nodes.resize(nodes.size() + 2);
    nodes[v].left = l;
    nodes[v].right = l + 1;
    stack.emplace_back(l + 1, k - left);
    stack.emplace_back(l, left);
  }
  return PhyloTree::from_nodes(std::move(nodes), 0);
}

struct SplitStats {
  std::uint64_t sackin = 0;
  std::uint64_t colless = 0;
  std::uint64_t min_split_sum = 0;
  double f_stat = 0.0;
};

// Same draws as generate() on the same stream, but only the additive
// statistics are accumulated; no tree is materialized.
inline SplitStats sample_split_stats(std::size_t n, ModelKind model, RngStream& rng,
                                     bool with_f_stat = true) {
  if (n < 1) throw std::invalid_argument("sample_split_stats: n must be >= 1");
  if (!is_tree_model(model))
    throw std::invalid_argument("sample_split_stats: tree model required");
  SplitStats st;
  std::vector<std::size_t> stack{n};
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    if (k == 1) continue;
    const std::size_t left = sample_left_leaves(model, k, rng);
    const std::size_t right = k - left;
    st.sackin += k;
    st.colless += left > right ? left - right : right - left;
    st.min_split_sum += std::min(left, right);
    if (with_f_stat) st.f_stat += std::log(static_cast<double>(k - 1));
    stack.push_back(right);
    stack.push_back(left);
  }
  return st;
}

}  // namespace treeshape
