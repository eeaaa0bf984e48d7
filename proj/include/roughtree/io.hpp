#pragma once

#include "roughtree/bseries.hpp"
#include "roughtree/hopf.hpp"
#include "roughtree/increments.hpp"
#include "roughtree/kdv.hpp"
#include "roughtree/roughpath.hpp"
#include "roughtree/trees.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace roughtree {

using Json = nlohmann::ordered_json;

// Trees: {"label": a, "children": [...]}.
Json to_json(const Tree& t);
Tree tree_from_json(const Json& j);
Json to_json(const Forest& f);

// Tensor vectors: [{"left": [...], "right": [...], "num": "...", "den": "..."}] in canonical order.
Json to_json(const TensorVector& v);
TensorVector tensor_from_json(const Json& j);

// Rough paths: {"grid", "d", "gamma", "start", "level1", "level2"[, "level3"]}.
Json to_json(const RoughPath& X);
RoughPath rough_path_from_json(const Json& j);

/// Shortest round-trip decimal form of a double.
std::string format_number(double x);

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// RFC 4180 text with CRLF line ends; fields are quoted when they need it.
std::string to_csv(const CsvTable& table);

/// index, time, components
CsvTable inc1_table(const std::string& name, const Inc1<double>& f);
/// i, j, t_i, t_j, components over i > j
CsvTable inc2_table(const std::string& name, const Inc2<double>& a);
/// tree, i, j, t_i, t_j, value over i > j, trees in canonical order
CsvTable tree_integral_table(const std::string& name, const TreeIntegralMap& X);
/// step, time, H0, H_alpha, |v(1)| ... |v(K)|
CsvTable trajectory_table(const std::string& name, const KdvTrajectory& traj);

}  // namespace roughtree
