#pragma once

#include "treeshape/tree.hpp"

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treeshape {

class newick_error : public std::invalid_argument {
 public:
  newick_error(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

namespace detail {

class NewickReader {
 public:
  explicit NewickReader(std::string_view text) : s_(text) {}

  PhyloTree read() {
    skip_ws();
    if (pos_ == s_.size()) throw newick_error("empty input", pos_);

    struct Frame {
      NodeRef node;
      NodeRef children[2];
      int count;
    };
    std::vector<Frame> open;
    std::vector<PhyloTree::Node> nodes;
    NodeRef done = kNoNode;

    for (;;) {
      // Expecting the start of a subtree.
      skip_ws();
      if (peek() == '(') {
        ++pos_;
        open.push_back({static_cast<NodeRef>(nodes.size()), {kNoNode, kNoNode}, 0});
        nodes.emplace_back();
        continue;
      }
      skip_label();
      done = static_cast<NodeRef>(nodes.size());
      nodes.emplace_back();

      // A subtree just closed; attach it and look for ',' or ')'.
      for (;;) {
        skip_ws();
        if (peek() == ':') skip_length();
        if (open.empty()) return finish(std::move(nodes), done);
        Frame& f = open.back();
        if (f.count == 2) throw newick_error("non-binary node (more than two children)", pos_);
        f.children[f.count++] = done;
        skip_ws();
        const char c = peek();
        if (c == ',') {
          if (f.count == 2) throw newick_error("non-binary node (more than two children)", pos_);
          ++pos_;
          break;
        }
        if (c == ')') {
          if (f.count != 2) throw newick_error("non-binary node (one child)", pos_);
          ++pos_;
          nodes[f.node].left = f.children[0];
          nodes[f.node].right = f.children[1];
          done = f.node;
          open.pop_back();
          skip_ws();
          skip_label();  // internal node labels are ignored
          continue;
        }
        if (c == '\0') throw newick_error("unexpected end of input", pos_);
        throw newick_error(std::string("unexpected character '") + c + "'", pos_);
      }
    }
  }

 private:
  PhyloTree finish(std::vector<PhyloTree::Node> nodes, NodeRef root) {
    skip_ws();
    if (peek() != ';') throw newick_error("missing ';'", pos_);
    ++pos_;
    skip_ws();
    if (pos_ != s_.size()) throw newick_error("trailing characters after ';'", pos_);
    return PhyloTree::from_nodes(std::move(nodes), root);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() &&
           (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }

  void skip_label() {
    if (peek() == '\'') {
      ++pos_;
      for (;;) {
        if (pos_ >= s_.size()) throw newick_error("unterminated quoted label", pos_);
        if (s_[pos_] == '\'') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
            pos_ += 2;
            continue;
          }
          ++pos_;
          return;
        }
        ++pos_;
      }
    }
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == ' ' || c == '\t' ||
          c == '\n' || c == '\r' || c == '\'')
        break;
      ++pos_;
    }
  }

  void skip_length() {
    ++pos_;  // ':'
    skip_ws();
    double value = 0.0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) throw newick_error("malformed branch length", pos_);
    pos_ += static_cast<std::size_t>(ptr - first);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Strictly binary Newick; labels and branch lengths are accepted and dropped.
inline PhyloTree parse_newick(std::string_view text) {
  return detail::NewickReader(text).read();
}

// Newick without branch lengths; leaves are labeled L1..Ln left to right.
inline std::string emit_newick(const PhyloTree& tree) {
  std::string out;
  out.reserve(tree.leaf_count() * 6);
  std::size_t next_label = 1;
  // Negative entries close a parenthesis; zero emits a comma.
  std::vector<long long> stack{static_cast<long long>(tree.root()) + 1};
  while (!stack.empty()) {
    const long long item = stack.back();
    stack.pop_back();
    if (item < 0) {
      out += ')';
      continue;
    }
    if (item == 0) {
      out += ',';
      continue;
    }
    const auto v = static_cast<NodeRef>(item - 1);
    const auto& nd = tree.node(v);
    if (nd.is_leaf()) {
      out += 'L';
      out += std::to_string(next_label++);
      continue;
    }
    out += '(';
    stack.push_back(-1);
    stack.push_back(static_cast<long long>(nd.right) + 1);
    stack.push_back(0);
    stack.push_back(static_cast<long long>(nd.left) + 1);
  }
  out += ';';
  return out;
}

}  // namespace treeshape
