#include "roughtree/planar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace roughtree {

PlanarTree PlanarTree::leaf() { return PlanarTree(std::make_shared<const Node>(Node{{}, 1})); }

PlanarTree PlanarTree::unary(PlanarTree child) {
  const int w = 1 + child.weight();
  return PlanarTree(std::make_shared<const Node>(Node{{std::move(child)}, w}));
}

PlanarTree PlanarTree::binary(PlanarTree left, PlanarTree right) {
  const int w = 1 + left.weight() + right.weight();
  return PlanarTree(std::make_shared<const Node>(Node{{std::move(left), std::move(right)}, w}));
}

bool operator==(const PlanarTree& lhs, const PlanarTree& rhs) {
  if (lhs.node_ == rhs.node_) return true;
  if (lhs.weight() != rhs.weight()) return false;
  const auto l = lhs.children();
  const auto r = rhs.children();
  return std::equal(l.begin(), l.end(), r.begin(), r.end());
}

int theta(const PlanarTree& t) {
  const auto kids = t.children();
  switch (kids.size()) {
    case 0: return 2;
    case 1: return 1 + theta(kids[0]);
    default: return theta(kids[0]) + theta(kids[1]);
  }
}

BigInt tree_factorial(const PlanarTree& t) {
  BigInt g = t.weight();
  for (const auto& c : t.children()) g *= tree_factorial(c);
  return g;
}

namespace {

// levels[w] holds every tree with w vertices, for w < n.
std::vector<std::vector<PlanarTree>> planar_levels(int n, std::size_t cap) {
  std::vector<std::vector<PlanarTree>> levels(static_cast<std::size_t>(std::max(n, 1)));
  std::size_t total = 0;
  for (int w = 1; w < n; ++w) {
    auto& cur = levels[static_cast<std::size_t>(w)];
    if (w == 1) {
      cur.push_back(PlanarTree::leaf());
    } else {
      for (const auto& c : levels[static_cast<std::size_t>(w - 1)]) cur.push_back(PlanarTree::unary(c));
      for (int l = 1; l <= w - 2; ++l) {
        for (const auto& a : levels[static_cast<std::size_t>(l)])
          for (const auto& b : levels[static_cast<std::size_t>(w - 1 - l)])
            cur.push_back(PlanarTree::binary(a, b));
      }
    }
    total += cur.size();
    if (total > cap) throw ResourceLimitError("planar enumeration exceeds cap");
  }
  return levels;
}

}  // namespace

void for_each_planar_binary(int n, const std::function<void(const PlanarTree&)>& visit,
                            std::size_t cap) {
  if (n < 1) throw std::invalid_argument("for_each_planar_binary: n must be >= 1");
  if (n == 1) {
    visit(PlanarTree::leaf());
    return;
  }
  const auto levels = planar_levels(n, cap);
  std::size_t emitted = 0;
  auto bump = [&] {
    if (++emitted > cap) throw ResourceLimitError("planar enumeration exceeds cap");
  };
  for (const auto& c : levels[static_cast<std::size_t>(n - 1)]) {
    bump();
    visit(PlanarTree::unary(c));
  }
  for (int l = 1; l <= n - 2; ++l) {
    for (const auto& a : levels[static_cast<std::size_t>(l)])
      for (const auto& b : levels[static_cast<std::size_t>(n - 1 - l)]) {
        bump();
        visit(PlanarTree::binary(a, b));
      }
  }
}

std::vector<PlanarTree> enumerate_planar_binary(int n, std::size_t cap) {
  std::vector<PlanarTree> out;
  for_each_planar_binary(n, [&](const PlanarTree& t) { out.push_back(t); }, cap);
  return out;
}

BigInt count_Zn(int n) {
  if (n < 1) throw std::invalid_argument("count_Zn: n must be >= 1");
  std::vector<BigInt> z(static_cast<std::size_t>(n) + 1, 0);
  z[1] = 1;
  for (int w = 2; w <= n; ++w) {
    BigInt acc = z[static_cast<std::size_t>(w - 1)];
    for (int l = 1; l <= w - 2; ++l) acc += z[static_cast<std::size_t>(l)] * z[static_cast<std::size_t>(w - 1 - l)];
    z[static_cast<std::size_t>(w)] = acc;
  }
  return z[static_cast<std::size_t>(n)];
}

namespace {

bool all_unary(const PlanarTree& t) {
  const auto kids = t.children();
  if (kids.size() > 1) return false;
  return kids.empty() || all_unary(kids[0]);
}

bool balanced(const PlanarTree& t, double lo, double hi) {
  const auto kids = t.children();
  if (kids.empty()) return true;
  if (kids.size() != 2) return false;
  const double a = kids[0].weight();
  const double b = kids[1].weight();
  const double ratio = std::min(a, b) / (a + b);
  if (ratio < lo || ratio > hi) return false;
  return balanced(kids[0], lo, hi) && balanced(kids[1], lo, hi);
}

}  // namespace

TreeClass classify_tree(const PlanarTree& t, double alpha, double band) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("classify_tree: alpha must lie in (0, 1/2]");
  if (all_unary(t)) return TreeClass::Simple;
  // Tolerance guards the ratio 1/2 against rounding when alpha + band hits it.
  if (balanced(t, alpha - band - 1e-12, alpha + band + 1e-12)) return TreeClass::Short;
  return TreeClass::Other;
}

const char* to_string(TreeClass c) {
  switch (c) {
    case TreeClass::Simple: return "simple";
    case TreeClass::Short: return "short";
    default: return "other";
  }
}

namespace {

void write_planar(std::ostringstream& os, const PlanarTree& t) {
  const auto kids = t.children();
  if (kids.empty()) {
    os << 'o';
    return;
  }
  os << '[';
  write_planar(os, kids[0]);
  if (kids.size() == 2) {
    os << ' ';
    write_planar(os, kids[1]);
  }
  os << ']';
}

struct PlanarParser {
  std::string_view s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const char* what) const {
    throw std::invalid_argument(std::string("parse_planar: ") + what + " at offset " + std::to_string(pos));
  }
  PlanarTree tree() {
    skip();
    if (pos >= s.size()) fail("unexpected end");
    if (s[pos] == 'o') {
      ++pos;
      return PlanarTree::leaf();
    }
    if (s[pos] != '[') fail("expected 'o' or '['");
    ++pos;
    PlanarTree first = tree();
    skip();
    if (pos < s.size() && s[pos] == ']') {
      ++pos;
      return PlanarTree::unary(std::move(first));
    }
    PlanarTree second = tree();
    skip();
    if (pos >= s.size() || s[pos] != ']') fail("expected ']'");
    ++pos;
    return PlanarTree::binary(std::move(first), std::move(second));
  }
};

}  // namespace

std::string to_string(const PlanarTree& t) {
  std::ostringstream os;
  write_planar(os, t);
  return os.str();
}

PlanarTree parse_planar(std::string_view text) {
  PlanarParser p{text};
  PlanarTree t = p.tree();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  return t;
}

}  // namespace roughtree
