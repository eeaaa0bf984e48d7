#pragma once

#include "roughtree/numeric.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace roughtree {

/// Unlabelled planar rooted tree with at most two ordered branches per vertex.
class PlanarTree {
 public:
  static PlanarTree leaf();
  static PlanarTree unary(PlanarTree child);
  static PlanarTree binary(PlanarTree left, PlanarTree right);

  std::span<const PlanarTree> children() const { return node_->children; }
  int weight() const { return node_->weight; }

  friend bool operator==(const PlanarTree& lhs, const PlanarTree& rhs);

 private:
  struct Node {
    std::vector<PlanarTree> children;
    int weight = 1;
  };
  explicit PlanarTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Degree function: theta(o) = 2, theta([t]) = 1 + theta(t), theta([t1 t2]) = theta(t1) + theta(t2).
int theta(const PlanarTree& t);
BigInt tree_factorial(const PlanarTree& t);

/// All planar unary-binary trees with exactly n vertices.
std::vector<PlanarTree> enumerate_planar_binary(int n, std::size_t cap = 1'000'000);
/// Visits the same sequence without keeping it alive.
void for_each_planar_binary(int n, const std::function<void(const PlanarTree&)>& visit,
                            std::size_t cap = 1'000'000);
/// Z_n by the Motzkin-type recurrence.
BigInt count_Zn(int n);

enum class TreeClass { Simple, Short, Other };

/// Simple: every vertex has at most one branch. Short(alpha): every inner vertex
/// has two branches and min(|t1|, |t2|) / (|t1| + |t2|) lies in
/// [alpha - band, alpha + band]. A single vertex is simple.
TreeClass classify_tree(const PlanarTree& t, double alpha, double band = 0.1);
const char* to_string(TreeClass c);

// "o" for a vertex, "[t]" and "[t1 t2]" otherwise.
std::string to_string(const PlanarTree& t);
PlanarTree parse_planar(std::string_view text);

}  // namespace roughtree
