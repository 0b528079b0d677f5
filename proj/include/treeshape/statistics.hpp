#pragma once

#include "treeshape/rng.hpp"
#include "treeshape/tree.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#if !defined(NDEBUG) || defined(TREESHAPE_ENABLE_CHECKS)
#define TREESHAPE_CHECKS_ENABLED 1
#include <string>
#endif

namespace treeshape {

struct TreeStats {
  std::uint64_t sackin = 0;
  std::uint64_t colless = 0;
  std::uint64_t min_split_sum = 0;
  double f_stat = 0.0;  // natural log
};

// Sum of leaf depths.
inline std::uint64_t sackin_by_depths(const PhyloTree& tree) {
  std::uint64_t s = 0;
  for (auto d : leaf_depths(tree)) s += d;
  return s;
}

// Sum of N_j over internal nodes.
inline std::uint64_t sackin_by_subtrees(const PhyloTree& tree) {
  std::uint64_t s = 0;
  for (const auto& nd : tree.nodes())
    if (!nd.is_leaf()) s += nd.leaf_count;
  return s;
}

inline std::uint64_t sackin(const PhyloTree& tree) {
  const std::uint64_t s = sackin_by_subtrees(tree);
#ifdef TREESHAPE_CHECKS_ENABLED
  const std::uint64_t by_depth = sackin_by_depths(tree);
  if (by_depth != s)
    throw std::logic_error("sackin: depth sum " + std::to_string(by_depth) +
                           " != subtree sum " + std::to_string(s));
#endif
  return s;
}

inline std::uint64_t colless(const PhyloTree& tree) {
  std::uint64_t c = 0;
  for (const auto& nd : tree.nodes()) {
    if (nd.is_leaf()) continue;
    const auto l = tree.node(nd.left).leaf_count;
    const auto r = tree.node(nd.right).leaf_count;
    c += l > r ? l - r : r - l;
  }
  return c;
}

inline std::uint64_t min_split_sum(const PhyloTree& tree) {
  std::uint64_t m = 0;
  for (const auto& nd : tree.nodes()) {
    if (nd.is_leaf()) continue;
    m += std::min(tree.node(nd.left).leaf_count, tree.node(nd.right).leaf_count);
  }
  return m;
}

// Sum over internal nodes of ln(N_j - 1).
inline double f_stat(const PhyloTree& tree) {
  double f = 0.0;
  for (const auto& nd : tree.nodes())
    if (!nd.is_leaf()) f += std::log(static_cast<double>(nd.leaf_count - 1));
  return f;
}

inline TreeStats compute_stats(const PhyloTree& tree) {
  TreeStats st{sackin(tree), colless(tree), min_split_sum(tree), f_stat(tree)};
#ifdef TREESHAPE_CHECKS_ENABLED
  if (st.colless != st.sackin - 2 * st.min_split_sum)
    throw std::logic_error("compute_stats: colless != sackin - 2 * min_split_sum");
#endif
  return st;
}

// N_j of an internal node chosen uniformly at random (a draw of K_n).
inline std::uint32_t random_ancestor_subtree_size(const PhyloTree& tree, RngStream& rng) {
  const std::size_t internal = tree.internal_count();
  if (internal == 0)
    throw std::invalid_argument("random_ancestor_subtree_size: tree needs n >= 2");
  auto pick = rng.uniform_index(internal);
  for (const auto& nd : tree.nodes()) {
    if (nd.is_leaf()) continue;
    if (pick-- == 0) return nd.leaf_count;
  }
  throw std::logic_error("random_ancestor_subtree_size: internal count mismatch");
}

}  // namespace treeshape
