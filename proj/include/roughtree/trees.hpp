#pragma once

#include "roughtree/numeric.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace roughtree {

/// Vertex decoration drawn from an alphabet {0, ..., d-1}.
struct Label {
  std::uint32_t id = 0;

  friend constexpr auto operator<=>(Label, Label) = default;
};

/// Rooted tree with labelled vertices, unordered branches.
///
/// Children are kept sorted by the canonical order (weight, root label,
/// lexicographic children), so structural equality coincides with
/// label-preserving isomorphism. Nodes are immutable and shared, so copies are
/// cheap and values may be handed between threads freely.
class Tree {
 public:
  Tree() = delete;

  static Tree leaf(Label a);
  /// Attach `children` below a new root labelled `a`; order of `children` is irrelevant.
  static Tree graft(Label a, std::vector<Tree> children);

  Label root() const { return node_->root; }
  std::span<const Tree> children() const { return node_->children; }
  int weight() const { return node_->weight; }
  bool is_leaf() const { return node_->children.empty(); }

  friend std::strong_ordering operator<=>(const Tree& lhs, const Tree& rhs);
  friend bool operator==(const Tree& lhs, const Tree& rhs) {
    return (lhs <=> rhs) == std::strong_ordering::equal;
  }

 private:
  struct Node {
    Label root;
    std::vector<Tree> children;
    int weight = 1;
  };
  explicit Tree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Commutative monomial of trees; the empty forest is the unit 1.
class Forest {
 public:
  Forest() = default;
  explicit Forest(Tree t);
  explicit Forest(std::vector<Tree> trees);

  std::span<const Tree> trees() const { return trees_; }
  std::size_t size() const { return trees_.size(); }
  bool is_unit() const { return trees_.empty(); }
  /// Graduation g: the total number of vertices.
  int degree() const;

  friend Forest operator*(const Forest& lhs, const Forest& rhs);
  friend std::strong_ordering operator<=>(const Forest& lhs, const Forest& rhs);
  friend bool operator==(const Forest& lhs, const Forest& rhs) {
    return (lhs <=> rhs) == std::strong_ordering::equal;
  }

 private:
  std::vector<Tree> trees_;
};

Tree leaf(Label a);
Tree b_plus(Label a, const Forest& f);
/// Children of `t` when its root is labelled `a`, otherwise nullopt (the zero element).
std::optional<Forest> b_minus(Label a, const Tree& t);

int weight(const Tree& t);
int weight(const Forest& f);

/// gamma(t) = |t| * prod gamma(children); multiplicative on forests.
BigInt tree_factorial(const Tree& t);
BigInt tree_factorial(const Forest& f);

/// Order of the label-preserving automorphism group, via child multiplicities.
BigInt symmetry_factor(const Tree& t);

/// Linear tree for an iterated-integral word. The first letter is the leaf
/// (innermost integration), the last letter is the root.
Tree linear_tree(std::span<const Label> word);
/// Inverse of linear_tree; nullopt when `t` branches.
std::optional<std::vector<Label>> linear_word(const Tree& t);

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Every canonical tree over d labels with weight <= max_weight, ordered by
/// weight then canonical order.
std::vector<Tree> enumerate_trees(std::uint32_t d, int max_weight,
                                  std::size_t cap = kDefaultEnumerationCap);

/// Every forest (including the unit) over d labels with degree <= max_degree.
std::vector<Forest> enumerate_forests(std::uint32_t d, int max_degree,
                                      std::size_t cap = kDefaultEnumerationCap);

// Bracket text form: a leaf is "[a]", an inner vertex "[a: c1 c2 ...]".
std::string to_string(const Tree& t);
std::string to_string(const Forest& f);
Tree parse_tree(std::string_view text);

}  // namespace roughtree
