#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace treeshape {

using NodeRef = std::uint32_t;
inline constexpr NodeRef kNoNode = std::numeric_limits<NodeRef>::max();

class invalid_tree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rooted binary phylogenetic tree shape. Internal nodes have exactly two
// ordered children, leaves none; every node caches its leaf count N_j.
// Immutable once built.
class PhyloTree {
 public:
  struct Node {
    NodeRef left = kNoNode;
    NodeRef right = kNoNode;
    std::uint32_t leaf_count = 1;

    bool is_leaf() const { return left == kNoNode; }
  };

  // The single-leaf tree (n = 1).
  PhyloTree() : nodes_{Node{}}, root_(0) {}

  static PhyloTree leaf() { return PhyloTree(); }

  static PhyloTree join(const PhyloTree& a, const PhyloTree& b) {
    PhyloTree t;
    t.nodes_.clear();
    t.nodes_.reserve(a.nodes_.size() + b.nodes_.size() + 1);
    t.nodes_.push_back(Node{});
    const NodeRef left = t.append(a);
    const NodeRef right = t.append(b);
    t.nodes_[0] = Node{left, right, static_cast<std::uint32_t>(a.leaf_count() + b.leaf_count())};
    t.root_ = 0;
    return t;
  }

  // Validates structure (binary, every node reachable exactly once from the
  // root) and recomputes leaf counts; input leaf_count fields are ignored.
  static PhyloTree from_nodes(std::vector<Node> nodes, NodeRef root) {
    if (nodes.empty() || root >= nodes.size())
      throw invalid_tree("tree has no root");
    std::vector<std::uint8_t> seen(nodes.size(), 0);
    std::vector<NodeRef> order;
    order.reserve(nodes.size());
    std::vector<NodeRef> stack{root};
    while (!stack.empty()) {
      NodeRef v = stack.back();
      stack.pop_back();
      if (v >= nodes.size()) throw invalid_tree("child reference out of range");
      if (seen[v]) throw invalid_tree("node reached twice");
      seen[v] = 1;
      order.push_back(v);
      const Node& nd = nodes[v];
      if ((nd.left == kNoNode) != (nd.right == kNoNode))
        throw invalid_tree("internal node without two children");
      if (nd.left != kNoNode) {
        stack.push_back(nd.right);
        stack.push_back(nd.left);
      }
    }
    if (order.size() != nodes.size()) throw invalid_tree("unreachable nodes");
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Node& nd = nodes[*it];
      nd.leaf_count = nd.is_leaf()
                          ? 1
                          : nodes[nd.left].leaf_count + nodes[nd.right].leaf_count;
    }
    PhyloTree t;
    t.nodes_ = std::move(nodes);
    t.root_ = root;
    return t;
  }

  std::size_t leaf_count() const { return nodes_[root_].leaf_count; }
  std::size_t internal_count() const { return leaf_count() - 1; }
  std::size_t node_count() const { return nodes_.size(); }
  NodeRef root() const { return root_; }
  const Node& node(NodeRef v) const { return nodes_[v]; }
  std::span<const Node> nodes() const { return nodes_; }

  // Nodes in preorder, left child first.
  std::vector<NodeRef> preorder() const {
    std::vector<NodeRef> order;
    order.reserve(nodes_.size());
    std::vector<NodeRef> stack{root_};
    while (!stack.empty()) {
      NodeRef v = stack.back();
      stack.pop_back();
      order.push_back(v);
      if (!nodes_[v].is_leaf()) {
        stack.push_back(nodes_[v].right);
        stack.push_back(nodes_[v].left);
      }
    }
    return order;
  }

 private:
  NodeRef append(const PhyloTree& sub) {
    const auto offset = static_cast<NodeRef>(nodes_.size());
    for (Node nd : sub.nodes_) {
      if (!nd.is_leaf()) {
        nd.left += offset;
        nd.right += offset;
      }
      nodes_.push_back(nd);
    }
    return sub.root_ + offset;
  }

  std::vector<Node> nodes_;
  NodeRef root_;
};

struct SubtreeLeafCount {
  NodeRef node;
  std::uint32_t leaves;
};

// N_j for every internal node, in preorder (root first).
inline std::vector<SubtreeLeafCount> leaf_counts(const PhyloTree& tree) {
  std::vector<SubtreeLeafCount> out;
  out.reserve(tree.internal_count());
  for (NodeRef v : tree.preorder()) {
    const auto& nd = tree.node(v);
    if (!nd.is_leaf()) out.push_back({v, nd.leaf_count});
  }
  return out;
}

// Number of internal ancestors of each leaf, leaves in left-to-right order.
inline std::vector<std::uint32_t> leaf_depths(const PhyloTree& tree) {
  std::vector<std::uint32_t> depths;
  depths.reserve(tree.leaf_count());
  std::vector<std::pair<NodeRef, std::uint32_t>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    const auto& nd = tree.node(v);
    if (nd.is_leaf()) {
      depths.push_back(d);
    } else {
      stack.emplace_back(nd.right, d + 1);
      stack.emplace_back(nd.left, d + 1);
    }
  }
  return depths;
}

// Canonical string of the shape up to child swaps: children are ordered by
// (leaf count, canonical string). Two trees have the same shape iff their
// canonical forms are equal.
inline std::string canonical_form(const PhyloTree& tree) {
  std::vector<std::string> form(tree.node_count());
  auto order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& nd = tree.node(*it);
    if (nd.is_leaf()) {
      form[*it] = "*";
      continue;
    }
    std::string& a = form[nd.left];
    std::string& b = form[nd.right];
    const auto na = tree.node(nd.left).leaf_count;
    const auto nb = tree.node(nd.right).leaf_count;
    bool swap = nb < na || (na == nb && b < a);
    std::string& first = swap ? b : a;
    std::string& second = swap ? a : b;
    form[*it].reserve(first.size() + second.size() + 3);
    form[*it] += '(';
    form[*it] += first;
    form[*it] += ',';
    form[*it] += second;
    form[*it] += ')';
    std::string().swap(a);
    std::string().swap(b);
  }
  return std::move(form[tree.root()]);
}

inline bool same_shape(const PhyloTree& a, const PhyloTree& b) {
  return a.leaf_count() == b.leaf_count() && canonical_form(a) == canonical_form(b);
}

// Caterpillar with n leaves: every internal node has a leaf as left child.
inline PhyloTree comb(std::size_t n) {
  if (n == 0) throw std::invalid_argument("comb: n must be >= 1");
  std::vector<PhyloTree::Node> nodes;
  nodes.reserve(2 * n - 1);
  // Build from the root down: internal k has left leaf and right internal k+1.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto self = static_cast<NodeRef>(nodes.size());
    nodes.push_back({self + 1, self + 2, 0});
    nodes.push_back({});
  }
  nodes.push_back({});
  return PhyloTree::from_nodes(std::move(nodes), 0);
}

// Maximally balanced shape: each node splits as (ceil(k/2), floor(k/2)).
inline PhyloTree balanced(std::size_t n) {
  if (n == 0) throw std::invalid_argument("balanced: n must be >= 1");
  std::vector<PhyloTree::Node> nodes(1);
  std::vector<std::pair<NodeRef, std::size_t>> stack{{0, n}};
  while (!stack.empty()) {
    auto [v, k] = stack.back();
    stack.pop_back();
    if (k == 1) continue;
    const auto l = static_cast<NodeRef>(nodes.size());
    nodes.resize(nodes.size() + 2);
    nodes[v].left = l;
    nodes[v].right = l + 1;
    stack.emplace_back(l + 1, k / 2);
    stack.emplace_back(l, k - k / 2);
  }
  return PhyloTree::from_nodes(std::move(nodes), 0);
}

// Binary tree on k vertices where each vertex has an optional left and right
// child (a binary search tree shape). May be empty.
class SearchTreeShape {
 public:
  struct Node {
    NodeRef left = kNoNode;
    NodeRef right = kNoNode;
    std::uint32_t size = 1;
  };

  SearchTreeShape() = default;

  static SearchTreeShape join(const SearchTreeShape* left, const SearchTreeShape* right) {
    SearchTreeShape t;
    t.nodes_.push_back(Node{});
    t.root_ = 0;
    std::uint32_t size = 1;
    if (left && !left->empty()) {
      t.nodes_[0].left = t.append(*left);
      size += left->size();
    }
    if (right && !right->empty()) {
      t.nodes_[0].right = t.append(*right);
      size += right->size();
    }
    t.nodes_[0].size = size;
    return t;
  }

  static SearchTreeShape from_nodes(std::vector<Node> nodes, NodeRef root) {
    SearchTreeShape t;
    if (nodes.empty()) {
      if (root != kNoNode) throw invalid_tree("root given for empty shape");
      return t;
    }
    if (root >= nodes.size()) throw invalid_tree("shape root out of range");
    std::vector<std::uint8_t> seen(nodes.size(), 0);
    std::vector<NodeRef> order;
    std::vector<NodeRef> stack{root};
    while (!stack.empty()) {
      NodeRef v = stack.back();
      stack.pop_back();
      if (v >= nodes.size()) throw invalid_tree("child reference out of range");
      if (seen[v]) throw invalid_tree("vertex reached twice");
      seen[v] = 1;
      order.push_back(v);
      if (nodes[v].right != kNoNode) stack.push_back(nodes[v].right);
      if (nodes[v].left != kNoNode) stack.push_back(nodes[v].left);
    }
    if (order.size() != nodes.size()) throw invalid_tree("unreachable vertices");
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Node& nd = nodes[*it];
      nd.size = 1 + (nd.left == kNoNode ? 0 : nodes[nd.left].size) +
                (nd.right == kNoNode ? 0 : nodes[nd.right].size);
    }
    t.nodes_ = std::move(nodes);
    t.root_ = root;
    return t;
  }

  bool empty() const { return root_ == kNoNode; }
  std::size_t size() const { return empty() ? 0 : nodes_[root_].size; }
  NodeRef root() const { return root_; }
  const Node& node(NodeRef v) const { return nodes_[v]; }
  std::span<const Node> nodes() const { return nodes_; }

  std::size_t subtree_size(NodeRef v) const { return v == kNoNode ? 0 : nodes_[v].size; }

 private:
  NodeRef append(const SearchTreeShape& sub) {
    const auto offset = static_cast<NodeRef>(nodes_.size());
    for (Node nd : sub.nodes_) {
      if (nd.left != kNoNode) nd.left += offset;
      if (nd.right != kNoNode) nd.right += offset;
      nodes_.push_back(nd);
    }
    return sub.root_ + offset;
  }

  std::vector<Node> nodes_;
  NodeRef root_ = kNoNode;
};

// Pads every vertex to outdegree two with new leaves: a shape with k vertices
// becomes a phylogenetic tree with k + 1 leaves, and a vertex subtree of size
// s becomes an internal node with s + 1 leaves.
inline PhyloTree phi_map(const SearchTreeShape& shape) {
  if (shape.empty()) return PhyloTree::leaf();
  std::vector<PhyloTree::Node> nodes(shape.nodes().size());
  auto attach = [&nodes](NodeRef child) {
    if (child != kNoNode) return child;
    nodes.push_back({});
    return static_cast<NodeRef>(nodes.size() - 1);
  };
  for (NodeRef v = 0; v < shape.nodes().size(); ++v) {
    const NodeRef left = attach(shape.node(v).left);
    const NodeRef right = attach(shape.node(v).right);
    nodes[v].left = left;
    nodes[v].right = right;
  }
  return PhyloTree::from_nodes(std::move(nodes), shape.root());
}

// Every ordered binary tree shape with k vertices (C_k of them).
inline std::vector<SearchTreeShape> enumerate_search_shapes(std::size_t k) {
  std::vector<std::vector<SearchTreeShape>> by_size(k + 1);
  by_size[0].emplace_back();
  for (std::size_t m = 1; m <= k; ++m) {
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& l : by_size[i])
        for (const auto& r : by_size[m - 1 - i])
          by_size[m].push_back(SearchTreeShape::join(&l, &r));
    }
  }
  return std::move(by_size[k]);
}

}  // namespace treeshape
