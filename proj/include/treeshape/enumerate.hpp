#pragma once

#include "treeshape/errors.hpp"
#include "treeshape/models.hpp"
#include "treeshape/rational.hpp"
#include "treeshape/tree.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace treeshape {

inline constexpr std::size_t kDefaultShapeCap = 16;

struct ShapeEntry {
  PhyloTree shape;
  Rational yule_prob;
  Rational uniform_prob;
};

struct ShapeTable {
  std::size_t n = 0;
  std::vector<ShapeEntry> entries;
};

// Every unordered shape with n leaves exactly once, each with its exact
// probability under the Yule and uniform models. A shape joining children A
// and B has probability q_n(|A|) P(A) P(B), doubled when A and B differ
// (either may sit on the left).
inline ShapeTable enumerate_shapes(std::size_t n, std::size_t cap = kDefaultShapeCap) {
  if (n < 1) throw std::invalid_argument("enumerate_shapes: n must be >= 1");
  if (n > cap) throw cap_exceeded("enumerate_shapes: n = " + std::to_string(n), cap);
  std::vector<std::vector<ShapeEntry>> by_size(n + 1);
  by_size[1].push_back({PhyloTree::leaf(), 1, 1});
  for (std::size_t k = 2; k <= n; ++k) {
    const auto yule = yule_split(k);
    const auto unif = uniform_split(k);
    for (std::size_t i = 1; 2 * i <= k; ++i) {
      const auto& small = by_size[i];
      const auto& large = by_size[k - i];
      for (std::size_t a = 0; a < small.size(); ++a) {
        for (std::size_t b = (2 * i == k ? a : 0); b < large.size(); ++b) {
          const int mult = (2 * i == k && a == b) ? 1 : 2;
          const auto& A = small[a];
          const auto& B = large[b];
          by_size[k].push_back({PhyloTree::join(A.shape, B.shape),
                                mult * yule.prob(i) * A.yule_prob * B.yule_prob,
                                mult * unif.prob(i) * A.uniform_prob * B.uniform_prob});
        }
      }
    }
  }
  return {n, std::move(by_size[n])};
}

// Number of distinct leaf labelings of a shape: n! / 2^(symmetric nodes),
// where a node is symmetric when its two child subtrees have the same shape.
inline BigInt labeled_representatives(const PhyloTree& tree) {
  unsigned symmetric = 0;
  for (const auto& nd : tree.nodes()) {
    if (nd.is_leaf()) continue;
    if (tree.node(nd.left).leaf_count != tree.node(nd.right).leaf_count) continue;
    // Compare the two child subtrees as standalone shapes.
    auto extract = [&tree](NodeRef r) {
      std::vector<PhyloTree::Node> nodes;
      std::vector<std::pair<NodeRef, NodeRef>> stack{{r, 0}};
      nodes.emplace_back();
      while (!stack.empty()) {
        auto [src, dst] = stack.back();
        stack.pop_back();
        const auto& s = tree.node(src);
        if (s.is_leaf()) continue;
        const auto l = static_cast<NodeRef>(nodes.size());
        nodes.resize(nodes.size() + 2);
        nodes[dst].left = l;
        nodes[dst].right = l + 1;
        stack.emplace_back(s.left, l);
        stack.emplace_back(s.right, l + 1);
      }
      return PhyloTree::from_nodes(std::move(nodes), 0);
    };
    if (same_shape(extract(nd.left), extract(nd.right))) ++symmetric;
  }
  return factorial(static_cast<unsigned>(tree.leaf_count())) / (BigInt(1) << symmetric);
}

}  // namespace treeshape
