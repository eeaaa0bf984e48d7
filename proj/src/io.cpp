#include "roughtree/io.hpp"

#include <charconv>
#include <sstream>

namespace roughtree {

Json to_json(const Tree& t) {
  Json kids = Json::array();
  for (const auto& c : t.children()) kids.push_back(to_json(c));
  return Json{{"label", t.root().id}, {"children", std::move(kids)}};
}

Tree tree_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("label")) throw std::invalid_argument("tree_from_json: expected {label, children}");
  const Json& label = j.at("label");
  if (!label.is_number_unsigned()) throw std::invalid_argument("tree_from_json: label must be a non-negative integer");
  std::vector<Tree> kids;
  if (j.contains("children"))
    for (const auto& c : j.at("children")) kids.push_back(tree_from_json(c));
  return Tree::graft(Label{label.get<std::uint32_t>()}, std::move(kids));
}

Json to_json(const Forest& f) {
  Json out = Json::array();
  for (const auto& t : f.trees()) out.push_back(to_json(t));
  return out;
}

namespace {

Forest forest_from_json(const Json& j) {
  std::vector<Tree> trees;
  for (const auto& t : j) trees.push_back(tree_from_json(t));
  return Forest(std::move(trees));
}

Json inc2_json(const Inc2<double>& a) {
  return Json{{"dim", a.dim()}, {"values", std::vector<double>(a.data().begin(), a.data().end())}};
}

Inc2<double> inc2_from_json(const GridPtr& grid, const Json& j) {
  Inc2<double> a(grid, j.at("dim").get<std::size_t>());
  const auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != a.data().size()) throw std::invalid_argument("rough_path_from_json: level size mismatch");
  std::copy(values.begin(), values.end(), a.data().begin());
  return a;
}

}  // namespace

Json to_json(const TensorVector& v) {
  Json out = Json::array();
  for (const auto& [pair, c] : v)
    out.push_back(Json{{"left", to_json(pair.first)},
                       {"right", to_json(pair.second)},
                       {"num", numerator(c).str()},
                       {"den", denominator(c).str()}});
  return out;
}

TensorVector tensor_from_json(const Json& j) {
  TensorVector out;
  for (const auto& rec : j) {
    const Rational c(BigInt(rec.at("num").get<std::string>()), BigInt(rec.at("den").get<std::string>()));
    add_term(out, forest_from_json(rec.at("left")), forest_from_json(rec.at("right")), c);
  }
  return out;
}

Json to_json(const RoughPath& X) {
  Json j{{"grid", std::vector<double>(X.grid->times().begin(), X.grid->times().end())},
         {"d", X.d},
         {"gamma", X.gamma},
         {"start", X.start},
         {"level1", inc2_json(X.level1)},
         {"level2", inc2_json(X.level2)}};
  if (X.level3) j["level3"] = inc2_json(*X.level3);
  return j;
}

RoughPath rough_path_from_json(const Json& j) {
  auto grid = Grid::from_times(j.at("grid").get<std::vector<double>>());
  RoughPath X{grid,
              j.at("d").get<std::size_t>(),
              j.at("gamma").get<double>(),
              j.at("start").get<std::vector<double>>(),
              inc2_from_json(grid, j.at("level1")),
              inc2_from_json(grid, j.at("level2")),
              std::nullopt};
  if (j.contains("level3")) X.level3 = inc2_from_json(grid, j.at("level3"));
  return X;
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_line(std::ostringstream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << "\r\n";
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::ostringstream os;
  csv_line(os, table.header);
  for (const auto& r : table.rows) csv_line(os, r);
  return os.str();
}

CsvTable inc1_table(const std::string& name, const Inc1<double>& f) {
  CsvTable t{name, {"index", "time"}, {}};
  for (std::size_t c = 0; c < f.dim(); ++c) t.header.push_back("c" + std::to_string(c));
  for (std::size_t i = 0; i < f.points(); ++i) {
    std::vector<std::string> row{std::to_string(i), format_number((*f.grid())[i])};
    for (std::size_t c = 0; c < f.dim(); ++c) row.push_back(format_number(f(i, c)));
    t.add_row(std::move(row));
  }
  return t;
}

CsvTable inc2_table(const std::string& name, const Inc2<double>& a) {
  CsvTable t{name, {"i", "j", "t_i", "t_j"}, {}};
  for (std::size_t c = 0; c < a.dim(); ++c) t.header.push_back("c" + std::to_string(c));
  const auto& g = *a.grid();
  for (std::size_t i = 1; i < a.points(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      std::vector<std::string> row{std::to_string(i), std::to_string(j), format_number(g[i]), format_number(g[j])};
      for (std::size_t c = 0; c < a.dim(); ++c) row.push_back(format_number(a(i, j, c)));
      t.add_row(std::move(row));
    }
  return t;
}

CsvTable tree_integral_table(const std::string& name, const TreeIntegralMap& X) {
  CsvTable t{name, {"tree", "i", "j", "t_i", "t_j", "value"}, {}};
  const auto& g = *X.grid;
  for (const auto& [tree, vals] : X.values) {
    const std::string key = to_string(tree);
    for (std::size_t i = 1; i < g.points(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        t.add_row({key, std::to_string(i), std::to_string(j), format_number(g[i]), format_number(g[j]),
                   format_number(vals(i, j))});
  }
  return t;
}

CsvTable trajectory_table(const std::string& name, const KdvTrajectory& traj) {
  CsvTable t{name, {"step", "time", "H0", "H_alpha"}, {}};
  const int K = traj.states.empty() ? 0 : traj.states.front().K();
  for (int k = 1; k <= K; ++k) t.header.push_back("abs_v" + std::to_string(k));
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), format_number(traj.times[i]), format_number(traj.h0[i]),
                                 format_number(traj.h_alpha[i])};
    for (int k = 1; k <= K; ++k) row.push_back(format_number(std::abs(traj.states[i][k])));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace roughtree
