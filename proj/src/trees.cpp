#include "roughtree/trees.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace roughtree {

Tree Tree::leaf(Label a) {
  return Tree(std::make_shared<const Node>(Node{a, {}, 1}));
}

Tree Tree::graft(Label a, std::vector<Tree> children) {
  std::sort(children.begin(), children.end());
  int w = 1;
  for (const auto& c : children) w += c.weight();
  return Tree(std::make_shared<const Node>(Node{a, std::move(children), w}));
}

std::strong_ordering operator<=>(const Tree& lhs, const Tree& rhs) {
  if (lhs.node_ == rhs.node_) return std::strong_ordering::equal;
  if (auto c = lhs.weight() <=> rhs.weight(); c != 0) return c;
  if (auto c = lhs.root() <=> rhs.root(); c != 0) return c;
  const auto l = lhs.children();
  const auto r = rhs.children();
  return std::lexicographical_compare_three_way(l.begin(), l.end(), r.begin(), r.end());
}

Forest::Forest(Tree t) : trees_{std::move(t)} {}

Forest::Forest(std::vector<Tree> trees) : trees_(std::move(trees)) {
  std::sort(trees_.begin(), trees_.end());
}

int Forest::degree() const {
  int g = 0;
  for (const auto& t : trees_) g += t.weight();
  return g;
}

Forest operator*(const Forest& lhs, const Forest& rhs) {
  Forest out;
  out.trees_.reserve(lhs.size() + rhs.size());
  std::merge(lhs.trees_.begin(), lhs.trees_.end(), rhs.trees_.begin(), rhs.trees_.end(),
             std::back_inserter(out.trees_));
  return out;
}

std::strong_ordering operator<=>(const Forest& lhs, const Forest& rhs) {
  return std::lexicographical_compare_three_way(lhs.trees_.begin(), lhs.trees_.end(),
                                                rhs.trees_.begin(), rhs.trees_.end());
}

Tree leaf(Label a) { return Tree::leaf(a); }

Tree b_plus(Label a, const Forest& f) {
  return Tree::graft(a, std::vector<Tree>(f.trees().begin(), f.trees().end()));
}

std::optional<Forest> b_minus(Label a, const Tree& t) {
  if (t.root() != a) return std::nullopt;
  return Forest(std::vector<Tree>(t.children().begin(), t.children().end()));
}

int weight(const Tree& t) { return t.weight(); }
int weight(const Forest& f) { return f.degree(); }

BigInt tree_factorial(const Tree& t) {
  BigInt g = t.weight();
  for (const auto& c : t.children()) g *= tree_factorial(c);
  return g;
}

BigInt tree_factorial(const Forest& f) {
  BigInt g = 1;
  for (const auto& t : f.trees()) g *= tree_factorial(t);
  return g;
}

BigInt symmetry_factor(const Tree& t) {
  BigInt s = 1;
  const auto kids = t.children();
  std::size_t i = 0;
  while (i < kids.size()) {
    std::size_t j = i;
    while (j < kids.size() && kids[j] == kids[i]) ++j;
    const BigInt sub = symmetry_factor(kids[i]);
    for (std::size_t m = 1; m <= j - i; ++m) s *= BigInt(m) * sub;
    i = j;
  }
  return s;
}

Tree linear_tree(std::span<const Label> word) {
  if (word.empty()) throw std::invalid_argument("linear_tree: empty word");
  Tree t = leaf(word.front());
  for (std::size_t i = 1; i < word.size(); ++i) t = Tree::graft(word[i], {t});
  return t;
}

std::optional<std::vector<Label>> linear_word(const Tree& t) {
  std::vector<Label> rev;
  const Tree* cur = &t;
  while (true) {
    rev.push_back(cur->root());
    if (cur->is_leaf()) break;
    if (cur->children().size() != 1) return std::nullopt;
    cur = &cur->children()[0];
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

namespace {

// Multisets of `pool` entries (indices non-decreasing from `start`) with total weight `remaining`.
void collect_forests(std::span<const Tree> pool, std::size_t start, int remaining,
                     std::vector<Tree>& current, std::vector<std::vector<Tree>>& out,
                     std::size_t cap) {
  if (remaining == 0) {
    out.push_back(current);
    if (out.size() > cap) throw ResourceLimitError("forest enumeration exceeds cap");
    return;
  }
  for (std::size_t i = start; i < pool.size(); ++i) {
    const int w = pool[i].weight();
    if (w > remaining) break;  // pool is weight-sorted
    current.push_back(pool[i]);
    collect_forests(pool, i, remaining - w, current, out, cap);
    current.pop_back();
  }
}

}  // namespace

std::vector<Tree> enumerate_trees(std::uint32_t d, int max_weight, std::size_t cap) {
  if (d < 1) throw std::invalid_argument("enumerate_trees: alphabet must be non-empty");
  if (max_weight < 1) throw std::invalid_argument("enumerate_trees: max_weight must be >= 1");
  std::vector<Tree> all;
  for (int w = 1; w <= max_weight; ++w) {
    std::vector<std::vector<Tree>> forests;
    std::vector<Tree> scratch;
    collect_forests(all, 0, w - 1, scratch, forests, cap);
    std::vector<Tree> batch;
    for (std::uint32_t a = 0; a < d; ++a) {
      for (const auto& f : forests) {
        batch.push_back(Tree::graft(Label{a}, f));
        if (all.size() + batch.size() > cap) {
          throw ResourceLimitError("tree enumeration exceeds cap of " + std::to_string(cap));
        }
      }
    }
    std::sort(batch.begin(), batch.end());
    all.insert(all.end(), batch.begin(), batch.end());
  }
  return all;
}

std::vector<Forest> enumerate_forests(std::uint32_t d, int max_degree, std::size_t cap) {
  std::vector<Forest> out{Forest{}};
  if (max_degree < 1) return out;
  const auto pool = enumerate_trees(d, max_degree, cap);
  for (int g = 1; g <= max_degree; ++g) {
    std::vector<std::vector<Tree>> raw;
    std::vector<Tree> scratch;
    collect_forests(pool, 0, g, scratch, raw, cap);
    std::vector<Forest> batch;
    batch.reserve(raw.size());
    for (auto& r : raw) batch.emplace_back(std::move(r));
    std::sort(batch.begin(), batch.end());
    out.insert(out.end(), batch.begin(), batch.end());
    if (out.size() > cap) throw ResourceLimitError("forest enumeration exceeds cap");
  }
  return out;
}

namespace {

void write_tree(std::ostringstream& os, const Tree& t) {
  os << '[' << t.root().id;
  if (!t.is_leaf()) {
    os << ':';
    for (const auto& c : t.children()) {
      os << ' ';
      write_tree(os, c);
    }
  }
  os << ']';
}

class TreeParser {
 public:
  explicit TreeParser(std::string_view s) : s_(s) {}

  Tree parse() {
    Tree t = tree();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return t;
  }

 private:
  Tree tree() {
    skip_ws();
    expect('[');
    skip_ws();
    std::uint32_t label = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), label);
    if (ec != std::errc{}) fail("expected label");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    skip_ws();
    std::vector<Tree> kids;
    if (peek() == ':') {
      ++pos_;
      skip_ws();
      while (peek() == '[') {
        kids.push_back(tree());
        skip_ws();
      }
    }
    expect(']');
    return Tree::graft(Label{label}, std::move(kids));
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse_tree: " + what + " at offset " + std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Tree& t) {
  std::ostringstream os;
  write_tree(os, t);
  return os.str();
}

std::string to_string(const Forest& f) {
  if (f.is_unit()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : f.trees()) {
    if (!first) os << ' ';
    first = false;
    write_tree(os, t);
  }
  return os.str();
}

Tree parse_tree(std::string_view text) { return TreeParser(text).parse(); }

}  // namespace roughtree
