#pragma once

#include "treeshape/rational.hpp"
#include "treeshape/tree.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace treeshape {

// {"leaf": "Lk"} | {"children": [t1, t2]}; leaves labeled L1..Ln left to right.
inline nlohmann::json tree_to_json(const PhyloTree& tree) {
  std::size_t next_label = 1;
  std::vector<nlohmann::json> built(tree.node_count());
  auto order = tree.preorder();
  // Assign labels in preorder, then assemble bottom-up.
  for (NodeRef v : order)
    if (tree.node(v).is_leaf())
      built[v] = nlohmann::json{{"leaf", "L" + std::to_string(next_label++)}};
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& nd = tree.node(*it);
    if (nd.is_leaf()) continue;
    built[*it] = nlohmann::json{
        {"children", nlohmann::json::array({std::move(built[nd.left]), std::move(built[nd.right])})}};
  }
  return std::move(built[tree.root()]);
}

inline PhyloTree tree_from_json(const nlohmann::json& j) {
  std::vector<PhyloTree::Node> nodes(1);
  std::vector<std::pair<const nlohmann::json*, NodeRef>> stack{{&j, 0}};
  while (!stack.empty()) {
    auto [obj, v] = stack.back();
    stack.pop_back();
    if (!obj->is_object()) throw invalid_tree("tree JSON: node must be an object");
    if (obj->contains("leaf")) continue;
    auto it = obj->find("children");
    if (it == obj->end() || !it->is_array())
      throw invalid_tree("tree JSON: node needs \"leaf\" or \"children\"");
    if (it->size() != 2) throw invalid_tree("tree JSON: non-binary node");
    const auto l = static_cast<NodeRef>(nodes.size());
    nodes.resize(nodes.size() + 2);
    nodes[v].left = l;
    nodes[v].right = l + 1;
    stack.emplace_back(&(*it)[1], l + 1);
    stack.emplace_back(&(*it)[0], l);
  }
  return PhyloTree::from_nodes(std::move(nodes), 0);
}

inline nlohmann::json rational_json(const Rational& r) { return to_string(r); }

}  // namespace treeshape
