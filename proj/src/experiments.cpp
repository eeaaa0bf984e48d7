#include "roughtree/experiments.hpp"

#include "roughtree/branched.hpp"
#include "roughtree/bseries.hpp"
#include "roughtree/hopf.hpp"
#include "roughtree/kdv.hpp"
#include "roughtree/planar.hpp"
#include "roughtree/report.hpp"
#include "roughtree/roughpath.hpp"
#include "roughtree/sewing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace roughtree {

// ---------------------------------------------------------------- settings

namespace {

enum class Kind { Real, Integer, Sizes, Text };

struct KeySpec {
  Kind kind;
  double lo, hi;
  bool lo_open = false, hi_open = false;
  std::vector<std::string> choices = {};
};

const std::map<std::string, KeySpec>& key_specs() {
  constexpr double inf = HUGE_VAL;
  static const std::map<std::string, KeySpec> specs = {
      {"B", {Kind::Real, 0.0, inf}},
      {"K", {Kind::Integer, 1, 64}},
      {"T", {Kind::Real, 0.0, 100.0, true}},
      {"alpha", {Kind::Real, -10.0, 10.0}},
      {"band", {Kind::Real, 0.0, 0.5}},
      {"epsilon", {Kind::Real, 0.0, 1.0, false, true}},
      {"gamma", {Kind::Real, 0.0, 1.0, true, true}},
      {"grid", {Kind::Integer, 1, double(kMaxInc2Steps)}},
      {"grids", {Kind::Sizes, 1, double(kMaxInc2Steps)}},
      {"h", {Kind::Real, 0.0, kMaxKdvStep, true}},
      {"k", {Kind::Real, 0.0, inf, true}},
      {"max_n", {Kind::Integer, 1, double(kMaxClassReportWeight)}},
      {"max_weight", {Kind::Integer, 1, 8}},
      {"n_max", {Kind::Integer, 0, 500}},
      {"norm", {Kind::Real, 0.0, inf}},
      {"out", {Kind::Text, 0, 0}},
      {"oversample", {Kind::Integer, 1, 65536}},
      {"path", {Kind::Text, 0, 0, false, false, {"cos", "identity", "sin"}}},
      {"seed", {Kind::Integer, 0, 9.007199254740992e15}},
      {"t", {Kind::Real, 0.0, inf}},
      {"tol", {Kind::Real, 0.0, 1.0, true}},
  };
  return specs;
}

double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(x))
    throw ConfigError("setting '" + key + "': not a finite number: '" + value + "'");
  return x;
}

long long parse_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (value.empty() || used != value.size()) throw ConfigError("setting '" + key + "': not an integer: '" + value + "'");
  return x;
}

std::vector<std::size_t> parse_sizes(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<std::size_t>(parse_integer(key, item)));
  if (out.empty()) throw ConfigError("setting '" + key + "': empty list");
  return out;
}

void check_range(const std::string& key, const KeySpec& spec, double x) {
  const bool low_ok = spec.lo_open ? x > spec.lo : x >= spec.lo;
  const bool high_ok = spec.hi_open ? x < spec.hi : x <= spec.hi;
  if (!low_ok || !high_ok) {
    std::ostringstream os;
    os << "setting '" << key << "' = " << x << " outside " << (spec.lo_open ? "(" : "[") << spec.lo << ", " << spec.hi
       << (spec.hi_open ? ")" : "]");
    throw ConfigError(os.str());
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "verify-trees",  "verify-hopf", "verify-increments", "verify-sewing", "rough-converge", "rough-solve",
      "bseries",       "kdv-run",     "kdv-verify",        "ns-majorant",   "tree-report"};
  return names;
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, spec] : key_specs()) k.push_back(key);
    return k;
  }();
  return keys;
}

void apply_setting(ExperimentConfig& config, std::string key, const std::string& raw) {
  std::replace(key.begin(), key.end(), '-', '_');
  const auto it = key_specs().find(key);
  if (it == key_specs().end()) throw ConfigError("unknown setting '" + key + "'");
  const KeySpec& spec = it->second;
  const std::string value = trim(raw);
  switch (spec.kind) {
    case Kind::Real: check_range(key, spec, parse_real(key, value)); break;
    case Kind::Integer: check_range(key, spec, double(parse_integer(key, value))); break;
    case Kind::Sizes:
      for (auto n : parse_sizes(key, value)) check_range(key, spec, double(n));
      break;
    case Kind::Text:
      if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end())
        throw ConfigError("setting '" + key + "': unsupported value '" + value + "'");
      break;
  }
  config.settings[key] = value;
}

void apply_config_text(ExperimentConfig& config, const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(config, ss.str());
}

std::uint64_t ExperimentConfig::seed() const { return static_cast<std::uint64_t>(integer_or("seed", 1)); }

std::string ExperimentConfig::out() const { return text("out").value_or(""); }

std::optional<double> ExperimentConfig::real(const std::string& key) const {
  const auto it = settings.find(key);
  if (it == settings.end()) return std::nullopt;
  return parse_real(key, it->second);
}

std::optional<long long> ExperimentConfig::integer(const std::string& key) const {
  const auto it = settings.find(key);
  if (it == settings.end()) return std::nullopt;
  return parse_integer(key, it->second);
}

std::optional<std::vector<std::size_t>> ExperimentConfig::sizes(const std::string& key) const {
  const auto it = settings.find(key);
  if (it == settings.end()) return std::nullopt;
  return parse_sizes(key, it->second);
}

std::optional<std::string> ExperimentConfig::text(const std::string& key) const {
  const auto it = settings.find(key);
  if (it == settings.end()) return std::nullopt;
  return it->second;
}

std::string canonical_config(const ExperimentConfig& config) {
  std::string out = "command=" + config.command + "\n";
  for (const auto& [k, v] : config.settings)
    if (k != "out") out += k + "=" + v + "\n";
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_config(config)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json manifest(const ExperimentConfig& config) {
  Json settings = Json::object();
  for (const auto& [k, v] : config.settings)
    if (k != "out") settings[k] = v;
  return Json{{"version", kVersion},
              {"command", config.command},
              {"seed", config.seed()},
              {"config_hash", config_hash(config)},
              {"config", std::move(settings)}};
}

// ---------------------------------------------------------------- experiments

namespace {

struct Run {
  const ExperimentConfig& config;
  ExperimentResult result;
  Json params = Json::object();
  Json data = Json::object();

  explicit Run(const ExperimentConfig& c) : config(c) {}

  void check(const std::string& name, double value, double limit, bool passed) {
    result.checks.push_back({name, value, limit, passed});
    result.passed = result.passed && passed;
  }
  void at_most(const std::string& name, double value, double limit) { check(name, value, limit, value <= limit); }
  void at_least(const std::string& name, double value, double limit) { check(name, value, limit, value >= limit); }

  ExperimentResult finish() {
    Json checks = Json::array();
    for (const auto& c : result.checks)
      checks.push_back(Json{{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"passed", c.passed}});
    result.report = Json{{"manifest", manifest(config)},
                         {"parameters", std::move(params)},
                         {"passed", result.passed},
                         {"checks", std::move(checks)},
                         {"data", std::move(data)}};
    return std::move(result);
  }
};

std::string big_text(const BigInt& x) { return x.str(); }

std::vector<std::string> row_of(std::initializer_list<double> xs) {
  std::vector<std::string> out;
  for (double x : xs) out.push_back(format_number(x));
  return out;
}

std::string tensor_text(const TensorVector& v) {
  std::string out;
  for (const auto& [pair, c] : v) {
    if (!out.empty()) out += " + ";
    out += c.str() + " " + to_string(pair.first) + " (x) " + to_string(pair.second);
  }
  return out.empty() ? "0" : out;
}

Inc2<double> random_inc2(const GridPtr& grid, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Inc2<double> a(grid, dim);
  for (std::size_t i = 0; i < grid->points(); ++i)
    for (std::size_t j = 0; j < grid->points(); ++j)
      for (std::size_t c = 0; c < dim; ++c) a(i, j, c) = i == j ? 0.0 : u(rng);
  return a;
}

SmoothPath named_path(const std::string& name) {
  if (name == "identity") return {1, [](double t, std::span<double> o) { o[0] = t; }};
  if (name == "cos") return {1, [](double t, std::span<double> o) { o[0] = std::cos(t); }};
  return {1, [](double t, std::span<double> o) { o[0] = std::sin(t); }};
}

/// Integral of x^2 dx along the named path over [0, 1].
double square_integral(const std::string& name) {
  if (name == "identity") return 1.0 / 3.0;
  if (name == "cos") return (std::pow(std::cos(1.0), 3) - 1.0) / 3.0;
  return std::pow(std::sin(1.0), 3) / 3.0;
}

std::vector<double> as_doubles(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

// Reduced coproducts displayed for the trees and forests up to degree 3.
struct GoldenLine {
  std::string forest;
  TensorVector expected;
};

std::vector<GoldenLine> golden_lines() {
  const Tree o = leaf(Label{0});
  const Tree lo = Tree::graft(Label{0}, {o});
  const Forest f_o(o), f_lo(lo), f_oo({o, o});
  std::vector<GoldenLine> lines;
  auto line = [&](std::string name, std::vector<std::tuple<int, Forest, Forest>> terms) {
    TensorVector v;
    for (auto& [c, l, r] : terms) add_term(v, l, r, Rational(c));
    lines.push_back({std::move(name), std::move(v)});
  };
  line("[0: [0]]", {{1, f_o, f_o}});
  line("[0] [0]", {{2, f_o, f_o}});
  line("[0: [0: [0]]]", {{1, f_lo, f_o}, {1, f_o, f_lo}});
  line("[0] [0: [0]]", {{1, f_o, f_oo}, {1, f_oo, f_o}, {1, f_lo, f_o}, {1, f_o, f_lo}});
  line("[0] [0] [0]", {{3, f_oo, f_o}, {3, f_o, f_oo}});
  line("[0: [0] [0]]", {{1, f_o, f_oo}, {2, f_lo, f_o}});
  return lines;
}

Forest parse_forest(const std::string& text) {
  // Top-level bracket groups separated by spaces.
  std::vector<Tree> trees;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[') {
      if (depth++ == 0) start = i;
    } else if (text[i] == ']' && --depth == 0) {
      trees.push_back(parse_tree(text.substr(start, i - start + 1)));
    }
  }
  return Forest(std::move(trees));
}

ExperimentResult verify_trees(const ExperimentConfig& config) {
  Run run(config);
  const int mw = static_cast<int>(config.integer_or("max_weight", 6));
  run.params["max_weight"] = mw;

  CsvTable counts{"tree_counts", {"weight", "d1", "d2"}, {}};
  std::vector<std::vector<std::size_t>> per_weight(2, std::vector<std::size_t>(mw + 1, 0));
  std::size_t canon_failures = 0, roundtrip_failures = 0, checked = 0;
  for (std::uint32_t d = 1; d <= 2; ++d) {
    for (const Tree& t : enumerate_trees(d, mw)) {
      ++per_weight[d - 1][t.weight()];
      ++checked;
      std::vector<Tree> kids(t.children().begin(), t.children().end());
      std::reverse(kids.begin(), kids.end());
      if (!(Tree::graft(t.root(), kids) == t)) ++canon_failures;
      if (!kids.empty()) {
        std::rotate(kids.begin(), kids.begin() + 1, kids.end());
        if (!(Tree::graft(t.root(), kids) == t)) ++canon_failures;
      }
      if (!(parse_tree(to_string(t)) == t) || !(tree_from_json(to_json(t)) == t)) ++roundtrip_failures;
    }
  }
  for (int w = 1; w <= mw; ++w)
    counts.add_row({std::to_string(w), std::to_string(per_weight[0][w]), std::to_string(per_weight[1][w])});
  run.data["trees_checked"] = checked;
  run.at_most("canonical_form_failures", double(canon_failures), 0);
  run.at_most("text_json_roundtrip_failures", double(roundtrip_failures), 0);

  std::size_t additivity_failures = 0;
  const auto small = enumerate_trees(1, 3);
  for (const Tree& a : small)
    for (const Tree& b : small) {
      const Forest f = Forest(a) * Forest(b);
      if (f.degree() != a.weight() + b.weight()) ++additivity_failures;
      if (b_plus(Label{0}, f).weight() != 1 + f.degree()) ++additivity_failures;
    }
  run.at_most("weight_additivity_failures", double(additivity_failures), 0);

  CsvTable planar{"planar_counts", {"n", "Z_n", "enumerated", "theta_min", "theta_max", "min_factorial"}, {}};
  std::size_t theta_failures = 0, zn_failures = 0;
  for (int n = 1; n <= 14; ++n) {
    std::size_t count = 0;
    int tmin = 1 << 30, tmax = 0;
    BigInt fmin = -1;
    for_each_planar_binary(n, [&](const PlanarTree& t) {
      ++count;
      const int th = theta(t);
      tmin = std::min(tmin, th);
      tmax = std::max(tmax, th);
      const BigInt g = tree_factorial(t);
      if (fmin < 0 || g < fmin) fmin = g;
      if (n <= 12 && (2 * th < n + 1 || th > n + 1)) ++theta_failures;
    });
    const BigInt zn = count_Zn(n);
    if (zn != count) ++zn_failures;
    planar.add_row({std::to_string(n), big_text(zn), std::to_string(count), std::to_string(tmin), std::to_string(tmax),
                    big_text(fmin)});
  }
  run.at_most("theta_bound_failures_n_le_12", double(theta_failures), 0);
  run.at_most("zn_enumeration_mismatches_n_le_14", double(zn_failures), 0);

  const auto classes = tree_class_report(12, 0.3, 0.1);
  run.check("simple_factorial_is_n_factorial", classes.simple_is_factorial ? 1 : 0, 1, classes.simple_is_factorial);
  run.at_least("min_factorial_over_power_of_two", classes.min_ratio_to_power, kFactorialBoundConstant);

  run.result.tables = {counts, planar};
  return run.finish();
}

ExperimentResult verify_hopf(const ExperimentConfig& config) {
  Run run(config);
  const int mw = static_cast<int>(config.integer_or("max_weight", 5));
  const double gamma = config.real_or("gamma", 0.4);
  run.params["max_weight"] = mw;
  run.params["gamma"] = gamma;

  const std::vector<std::pair<Rational, Rational>> points = {
      {Rational(1), Rational(1)}, {Rational(1, 2), Rational(-1, 3)}, {Rational(-2), Rational(5, 7)}};
  for (std::uint32_t d = 1; d <= 2; ++d) {
    const auto rep = check_hopf_identities(d, mw, points);
    const std::string tag = "d" + std::to_string(d);
    run.data["forests_" + tag] = rep.forests;
    run.at_most("coassociativity_failures_" + tag, double(rep.coassociativity_failures), 0);
    run.at_most("counit_failures_" + tag, double(rep.counit_failures), 0);
    run.at_most("grading_failures_" + tag, double(rep.grading_failures), 0);
    run.at_most("tree_binomial_failures_" + tag, double(rep.binomial_failures), 0);
    if (!rep.messages.empty()) run.data["messages_" + tag] = rep.messages;
  }

  CsvTable golden{"coproduct_golden", {"forest", "computed", "expected", "match"}, {}};
  std::size_t mismatches = 0;
  for (const auto& line : golden_lines()) {
    const TensorVector got = reduced_coproduct(parse_forest(line.forest));
    const bool ok = got == line.expected;
    if (!ok) ++mismatches;
    golden.add_row({line.forest, tensor_text(got), tensor_text(line.expected), ok ? "yes" : "no"});
  }
  run.at_most("golden_coproduct_mismatches", double(mismatches), 0);

  CsvTable q{"q_gamma", {"tree", "weight", "q", "factorial", "q_times_factorial_pow_gamma"}, {}};
  for (const auto& row : q_gamma_report(1, gamma, std::min(mw, 7)))
    q.add_row({to_string(row.tree), std::to_string(row.tree.weight()), format_number(row.q),
               format_number(row.factorial), format_number(row.ratio)});

  run.result.tables = {golden, q};
  return run.finish();
}

ExperimentResult verify_increments(const ExperimentConfig& config) {
  Run run(config);
  const auto n = static_cast<std::size_t>(config.integer_or("grid", 256));
  const double tol = config.real_or("tol", 1e-12);
  if (n > kMaxInc3Steps) throw ConfigError("verify-increments: grid must be <= 256 (3-increments are materialised)");
  run.params["grid"] = n;
  run.params["tol"] = tol;
  const auto grid = Grid::uniform(n);
  const std::size_t p = grid->points();

  // delta delta f = 0 for 1-increments, every ordered triple.
  const auto f = random_walk(grid, 2, config.seed());
  const auto a = delta1(f);
  double dd = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t c = 0; c < 2; ++c) dd = std::max(dd, std::abs(a(i, k, c) - a(i, j, c) - a(j, k, c)));
  run.at_most("delta_delta_1_relative", dd / a.max_abs(), tol);

  // delta delta b = 0 for 2-increments, sampled 4-tuples.
  const auto b = random_inc2(grid, 1, config.seed() + 1);
  const auto db = delta2(b);
  std::mt19937_64 rng(config.seed() + 2);
  std::uniform_int_distribution<std::size_t> pick(0, p - 1);
  double ddd = 0.0;
  for (int s = 0; s < 100000; ++s)
    ddd = std::max(ddd, std::abs(delta3_at(db, pick(rng), pick(rng), pick(rng), pick(rng))));
  run.at_most("delta_delta_2_relative", ddd / db.max_abs(), tol);

  // Exact 2-increments are reconstructed from their first column.
  const auto g = reconstruct(a);
  double rec = 0.0, fmax = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t c = 0; c < 2; ++c) {
      rec = std::max(rec, std::abs(g(i, c) - (f(i, c) - f(0, c))));
      fmax = std::max(fmax, std::abs(f(i, c)));
    }
  run.at_most("reconstruction_relative", rec / fmax, tol);

  // A random 2-increment is not exact.
  const auto back = delta1(reconstruct(b));
  double miss = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) miss = std::max(miss, std::abs(back(i, j) - b(i, j)));
  run.at_least("non_exact_control_gap", miss, 1e-3);

  return run.finish();
}

ExperimentResult verify_sewing(const ExperimentConfig& config) {
  Run run(config);
  const auto n = static_cast<std::size_t>(config.integer_or("grid", 128));
  const double tol = config.real_or("tol", 1e-12);
  if (n > kMaxInc3Steps) throw ConfigError("verify-sewing: grid must be <= 256 (3-increments are materialised)");
  run.params["grid"] = n;
  run.params["tol"] = tol;
  const auto grid = Grid::uniform(n);

  const auto b1 = random_inc2(grid, 1, config.seed());
  const auto b2 = random_inc2(grid, 1, config.seed() + 1);
  const auto h1 = delta2(b1);
  const auto h2 = delta2(b2);
  const auto l1 = lambda(h1);
  const auto l2 = lambda(h2);

  run.at_most("delta_lambda_minus_h_relative", (delta2(l1) - h1).max_abs() / h1.max_abs(), tol);
  run.at_most("sew_limit_of_lambda", sew_limit(l1).max_abs(), tol);

  const auto combo = lambda(delta2(2.5 * b1 - 1.5 * b2));
  const auto expected = 2.5 * l1 - 1.5 * l2;
  run.at_most("linearity_relative", (combo - expected).max_abs() / expected.max_abs(), tol);

  const Inc3Fn lazy = [&](std::size_t i, std::size_t j, std::size_t k, std::span<double> out) { out[0] = h1(i, j, k); };
  run.at_most("lazy_matches_materialised", (lambda(grid, 1, lazy) - l1).max_abs() / l1.max_abs(), tol);

  bool rejected = false;
  try {
    (void)lambda(cup(b1, b2));
  } catch (const NotClosedError&) {
    rejected = true;
  }
  run.check("non_closed_rejected", rejected ? 1 : 0, 1, rejected);
  return run.finish();
}

ExperimentResult rough_converge(const ExperimentConfig& config) {
  Run run(config);
  const std::string path = config.text("path").value_or("sin");
  const double gamma = config.real_or("gamma", 0.5);
  const auto grids = config.sizes("grids").value_or(std::vector<std::size_t>{64, 128, 256, 512, 1024});
  const auto over = static_cast<std::size_t>(config.integer_or("oversample", 8));
  const double tol = config.real_or("tol", 1e-6);
  run.params["path"] = path;
  run.params["gamma"] = gamma;
  run.params["grids"] = grids;
  run.params["oversample"] = over;
  run.params["tol"] = tol;
  if (grids.size() < 2) throw ConfigError("rough-converge: need at least two grids");

  const auto phi = scalar_polynomial_field({0.0, 0.0, 1.0});
  const double exact = square_integral(path);
  CsvTable table{"convergence", {"N", "integral", "exact", "error"}, {}};
  std::vector<double> errors;
  std::optional<RoughIntegral> last;
  for (std::size_t n : grids) {
    const auto fine = sample(named_path(path), Grid::uniform(n * over));
    const auto X = lift_smooth(fine, 2, over, gamma);
    last = rough_integral(*phi, X);
    const double value = last->f(n, 0);
    errors.push_back(std::abs(value - exact));
    table.add_row({std::to_string(n), format_number(value), format_number(exact), format_number(errors.back())});
  }
  const double order = -loglog_slope(as_doubles(grids), errors);
  run.data["obstruction_slope"] = last->obstruction.slope;
  run.data["remainder_norm"] = last->remainder_norm;
  run.at_most("final_error", errors.back(), tol);
  run.check("error_order", order, 0.9, order >= 0.9 && order <= 2.2);
  run.result.tables = {table};
  return run.finish();
}

ExperimentResult rough_solve(const ExperimentConfig& config) {
  Run run(config);
  const auto grids = config.sizes("grids").value_or(std::vector<std::size_t>{64, 128, 256, 512});
  const auto over = static_cast<std::size_t>(config.integer_or("oversample", 1));
  const double gamma = config.real_or("gamma", 0.5);
  run.params["grids"] = grids;
  run.params["oversample"] = over;
  run.params["gamma"] = gamma;
  if (grids.size() < 2) throw ConfigError("rough-solve: need at least two grids");

  const auto f = scalar_polynomial_field({0.0, 1.0});
  const std::vector<double> y0 = {1.0};
  CsvTable table{"convergence", {"N", "y1", "error"}, {}};
  std::vector<double> errors;
  double picard_gap = 0.0;
  for (std::size_t n : grids) {
    const auto X = lift_smooth(sample(named_path("identity"), Grid::uniform(n * over)), 2, over, gamma);
    const auto y = rde_solve(*f, X, y0);
    errors.push_back(std::abs(y(n, 0) - std::exp(1.0)));
    table.add_row({std::to_string(n), format_number(y(n, 0)), format_number(errors.back())});
    if (n == grids.front()) {
      const auto pic = rde_solve_picard(*f, X, y0);
      for (std::size_t i = 0; i <= n; ++i) picard_gap = std::max(picard_gap, std::abs(pic.y(i, 0) - y(i, 0)));
    }
  }
  const double order = -loglog_slope(as_doubles(grids), errors);
  run.check("error_order", order, 1.8, order >= 1.8 && order <= 2.3);
  run.at_most("picard_vs_step_gap", picard_gap, 1e-10);
  run.result.tables = {table};
  return run.finish();
}

ExperimentResult bseries(const ExperimentConfig& config) {
  Run run(config);
  const int n = static_cast<int>(config.integer_or("max_weight", 4));
  const auto grids = config.sizes("grids").value_or(std::vector<std::size_t>{4, 8, 16, 32});
  const auto over = static_cast<std::size_t>(config.integer_or("oversample", 256));
  const auto identity_n = static_cast<std::size_t>(config.integer_or("grid", 1024));
  const double tol = config.real_or("tol", 1e-9);
  run.params["max_weight"] = n;
  run.params["grids"] = grids;
  run.params["oversample"] = over;
  run.params["grid"] = identity_n;
  run.params["tol"] = tol;
  if (grids.size() < 2) throw ConfigError("bseries: need at least two grids");

  // y' = y^2 x', y(0) = 1/2, x = t: y = 1 / (2 - t).
  const auto f = scalar_polynomial_field({0.0, 0.0, 1.0});
  const std::vector<double> y0 = {0.5};
  const SmoothPath x = named_path("identity");
  CsvTable table{"global_convergence", {"N", "y1", "error"}, {}};
  std::vector<double> errors;
  for (std::size_t N : grids) {
    const auto y = series_solution(*f, sample(x, Grid::uniform(N * over)), over, y0, n);
    errors.push_back(std::abs(y(N, 0) - 1.0));
    table.add_row({std::to_string(N), format_number(y(N, 0)), format_number(errors.back())});
  }
  const double order = -loglog_slope(as_doubles(grids), errors);
  run.at_least("global_order", order, n - 0.5);

  // Weight-2 truncation is the second-order rough step.
  {
    const std::size_t N = grids.front();
    const auto fine = sample(x, Grid::uniform(N * over));
    const auto ys = series_solution(*f, fine, over, y0, 2);
    const auto yr = rde_solve(*f, lift_smooth(fine, 2, over), y0);
    double gap = 0.0;
    for (std::size_t i = 0; i <= N; ++i) gap = std::max(gap, std::abs(ys(i, 0) - yr(i, 0)));
    run.at_most("weight2_vs_rough_step", gap, 1e-12);
  }

  CsvTable local{"local_orders", {"max_weight", "horizon", "error"}, {}};
  const std::vector<double> horizons = {0.4, 0.2, 0.1, 0.05};
  const auto rows = series_local_orders(*f, x, y0, {1, 2, 3, 4}, horizons, 512,
                                        [](double h) { return std::vector<double>{1.0 / (2.0 - h)}; });
  double min_step = HUGE_VAL;
  Json slopes = Json::array();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < horizons.size(); ++k)
      local.add_row({std::to_string(rows[r].max_weight), format_number(horizons[k]), format_number(rows[r].errors[k])});
    slopes.push_back(rows[r].slope);
    if (r > 0) min_step = std::min(min_step, rows[r].slope - rows[r - 1].slope);
  }
  run.data["local_slopes"] = slopes;
  run.at_least("local_order_increment", min_step, 0.8);

  // Identity path: X^tau_{ts} = (t - s)^|tau| / tau!.
  {
    const std::size_t id_over = 32;
    const auto trees = enumerate_trees(1, 4);
    const auto X = tree_integrals(sample(x, Grid::uniform(identity_n * id_over)), id_over, trees);
    const auto& g = *X.grid;
    double worst = 0.0;
    for (const Tree& t : trees) {
      const auto& v = X.at(t);
      for (std::size_t i = 1; i < g.points(); ++i)
        for (std::size_t j = 0; j < i; ++j)
          worst = std::max(worst, std::abs(v(i, j) - identity_path_integral(t, g[i], g[j])));
    }
    run.at_most("identity_path_max_error", worst, tol);
  }

  run.result.tables = {table, local};
  return run.finish();
}

std::size_t kdv_steps(double T, double h) {
  const double steps = std::round(T / h);
  if (steps < 1 || std::abs(steps * h - T) > 1e-9 * std::max(1.0, T))
    throw ConfigError("T must be a whole multiple of h");
  return static_cast<std::size_t>(steps);
}

ExperimentResult kdv_run(const ExperimentConfig& config) {
  Run run(config);
  const int K = static_cast<int>(config.integer_or("K", 8));
  const double T = config.real_or("T", 0.5);
  const double h = config.real_or("h", 1e-3);
  const double alpha = config.real_or("alpha", 0.0);
  const double tol = config.real_or("tol", 1e-4);
  run.params["K"] = K;
  run.params["T"] = T;
  run.params["h"] = h;
  run.params["alpha"] = alpha;
  run.params["tol"] = tol;
  run.params["single_tree_coefficient"] = kSingleTreeCoefficient;

  const auto traj = kdv_solve(smooth_state(K), T, kdv_steps(T, h), alpha);
  const double drift = std::abs(traj.h0.back() - traj.h0.front()) / traj.h0.front();
  run.data["H0_initial"] = traj.h0.front();
  run.data["H0_final"] = traj.h0.back();
  run.data["H_alpha_final"] = traj.h_alpha.back();
  run.at_most("H0_relative_drift", drift, tol);
  run.result.tables = {trajectory_table("trajectory", traj)};
  return run.finish();
}

ExperimentResult kdv_verify(const ExperimentConfig& config) {
  Run run(config);
  const int K = static_cast<int>(config.integer_or("K", 8));
  const double h = config.real_or("h", 1e-3);
  const double T = config.real_or("T", 0.25);
  const double tol = config.real_or("tol", 1e-8);
  run.params["K"] = K;
  run.params["h"] = h;
  run.params["T"] = T;
  run.params["tol"] = tol;
  run.params["single_tree_coefficient"] = kSingleTreeCoefficient;
  const double s = 0.1, t = 0.45;

  double c1 = 0.0;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2)
      for (int k3 = -K; k3 <= K; ++k3) {
        if (!k1 || !k2 || !k3) continue;
        SpectralState e1(K), e2(K), e3(K);
        e1[k1] = e2[k2] = e3[k3] = 1.0;
        c1 = std::max(c1, conservation1_residual(e1, e2, e3, s, t));
      }
  run.at_most("conservation1_basis_max", c1, 1e-12);

  CsvTable residuals{"residuals", {"seed", "conservation2_factor1", "conservation2_factor2", "single_relation",
                                   "double_relation", "reality_after_step"},
                     {}};
  double c2 = 0.0, c2_plain = 0.0, rel1 = 0.0, rel2 = 0.0, real = 0.0;
  for (std::uint64_t k = 0; k < 3; ++k) {
    const auto seed = config.seed() + 10 * k;
    const auto p1 = random_state(K, seed), p2 = random_state(K, seed + 1), p3 = random_state(K, seed + 2),
               p4 = random_state(K, seed + 3);
    const double a = conservation2_residual(p1, s, t, 1.0);
    const double b = conservation2_residual(p1, s, t, kSingleTreeCoefficient);
    const double r1 = single_relation_residual(p1, p2, p3, s, 0.3, t);
    const double r2 = double_relation_residual(p1, p2, p3, p4, s, 0.3, t);
    const double re = kdv_tree_step(p1, 0.0, 0.01).reality_defect();
    c2_plain = std::max(c2_plain, a);
    c2 = std::max(c2, b);
    rel1 = std::max(rel1, r1);
    rel2 = std::max(rel2, r2);
    real = std::max(real, re);
    residuals.add_row({std::to_string(seed), format_number(a), format_number(b), format_number(r1), format_number(r2),
                       format_number(re)});
  }
  run.data["conservation2_plain_symmetrised"] = c2_plain;
  run.at_most("conservation2", c2, tol);
  run.at_most("single_relation", rel1, tol);
  run.at_most("double_relation", rel2, tol);
  run.at_most("reality_defect", real, 1e-14);

  // One step against two half steps, with h |omega| small for the largest phases.
  CsvTable richardson{"richardson", {"h", "gap"}, {}};
  const auto v0 = smooth_state(K);
  std::vector<double> hs = {0.005, 0.0025, 0.00125, 0.000625}, gaps;
  for (double step : hs) {
    const auto one = kdv_tree_step(v0, 0.0, step);
    const auto two = kdv_tree_step(kdv_tree_step(v0, 0.0, step / 2), step / 2, step);
    gaps.push_back((one - two).max_abs());
    richardson.add_row(row_of({step, gaps.back()}));
  }
  run.at_least("one_vs_two_half_steps_order", loglog_slope(hs, gaps), 2.0);

  const std::size_t steps = kdv_steps(T, h);
  const auto tree = kdv_solve(v0, T, steps).states.back();
  const auto rk = rk4_reference(v0, T, steps);
  run.at_most("rk4_sup_mode_gap", (tree - rk).max_abs(), 1e-4);

  run.result.tables = {residuals, richardson};
  return run.finish();
}

ExperimentResult ns_majorant_run(const ExperimentConfig& config) {
  Run run(config);
  const double eps = config.real_or("epsilon", 0.0);
  const double B = config.real_or("B", 0.1);
  const double norm = config.real_or("norm", 0.5);
  const double t = config.real_or("t", 1.0);
  const double k = config.real_or("k", 1.0);
  const int n_max = static_cast<int>(config.integer_or("n_max", 30));
  const auto rep = ns_majorant(eps, B, norm, t, k, n_max);
  run.params = Json{{"epsilon", eps}, {"B", B}, {"norm", norm}, {"t", t}, {"k", k}, {"n_max", n_max}, {"alpha", rep.alpha}};
  run.data["regime"] = rep.regime;
  run.data["ratios_below_one"] = rep.ratios_below_one;
  run.data["asymptotic_ratio"] = rep.asymptotic_ratio;
  run.data["t_star"] = rep.t_star ? Json(*rep.t_star) : Json(nullptr);
  run.data["sum"] = rep.rows.back().partial_sum;
  CsvTable table{"majorant", {"n", "Z_n", "term", "partial_sum", "ratio"}, {}};
  for (const auto& row : rep.rows)
    table.add_row({std::to_string(row.n), big_text(row.zn), format_number(row.term), format_number(row.partial_sum),
                   row.ratio ? format_number(*row.ratio) : ""});
  run.result.tables = {table};
  return run.finish();
}

ExperimentResult tree_report(const ExperimentConfig& config) {
  Run run(config);
  const int max_n = static_cast<int>(config.integer_or("max_n", 12));
  const double alpha = config.real_or("alpha", 0.3);
  const double band = config.real_or("band", 0.1);
  const double gamma = config.real_or("gamma", 0.4);
  const int mw = static_cast<int>(config.integer_or("max_weight", 4));
  const auto n = static_cast<std::size_t>(config.integer_or("grid", 32));
  if (!(alpha > 0.0 && alpha <= 0.5)) throw ConfigError("tree-report: alpha must lie in (0, 0.5]");
  run.params = Json{{"max_n", max_n}, {"alpha", alpha}, {"band", band}, {"gamma", gamma}, {"max_weight", mw}, {"grid", n}};

  const auto classes = tree_class_report(max_n, alpha, band);
  CsvTable cls{"tree_classes", {"n", "class", "count", "min_factorial", "max_factorial"}, {}};
  for (const auto& r : classes.rows)
    cls.add_row({std::to_string(r.n), to_string(r.cls), std::to_string(r.count), big_text(r.min_factorial),
                 big_text(r.max_factorial)});
  const auto& sf = classes.short_fit;
  run.data["simple_is_factorial"] = classes.simple_is_factorial;
  run.data["min_factorial_over_power_of_two"] = classes.min_ratio_to_power;
  run.data["short_fit"] = Json{{"points", sf.points}, {"D1", sf.D1}, {"D2", sf.D2}, {"D3", sf.D3}, {"D4", sf.D4},
                               {"upper_residual", sf.upper_residual}, {"lower_residual", sf.lower_residual}};
  const auto zn = zn_growth_fit(16);
  run.data["zn_fit"] = Json{{"n_max", zn.n_max}, {"least_D", zn.least_D}, {"fitted_D", zn.fitted_D},
                            {"intercept", zn.intercept}, {"max_residual", zn.max_residual}};

  CsvTable q{"q_gamma", {"tree", "weight", "q", "factorial", "q_times_factorial_pow_gamma"}, {}};
  for (const auto& row : q_gamma_report(1, gamma, std::min(mw + 2, 7)))
    q.add_row({to_string(row.tree), std::to_string(row.tree.weight()), format_number(row.q),
               format_number(row.factorial), format_number(row.ratio)});

  // Growth constants of a seeded piecewise-linear driver.
  const auto X = lift_smooth(random_walk(Grid::uniform(n), 2, config.seed()), 3, 1, gamma);
  const auto gf = growth_fit(X);
  run.data["level_growth"] = Json{{"norms", gf.norms}, {"C1", gf.c1}, {"C2", gf.c2},
                                  {"max_log_residual", gf.max_log_residual}};
  TreeLevels levels = branched_from_rough_path(X);
  BranchedOptions bopts;
  bopts.gamma = gamma;
  for (const Tree& t : enumerate_trees(2, mw))
    if (!levels.count(t)) extend_branched(levels, t, bopts);
  const auto bf = branched_growth_fit(levels, gamma);
  CsvTable growth{"branched_growth", {"tree", "weight", "norm", "q_gamma"}, {}};
  for (const auto& r : bf.rows)
    growth.add_row({to_string(r.tree), std::to_string(r.tree.weight()), format_number(r.norm), format_number(r.q)});
  run.data["branched_growth"] = Json{{"C1", bf.c1}, {"C2", bf.c2}};

  run.result.tables = {cls, q, growth};
  return run.finish();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  static const std::map<std::string, std::function<ExperimentResult(const ExperimentConfig&)>> table = {
      {"verify-trees", verify_trees},   {"verify-hopf", verify_hopf},       {"verify-increments", verify_increments},
      {"verify-sewing", verify_sewing}, {"rough-converge", rough_converge}, {"rough-solve", rough_solve},
      {"bseries", bseries},             {"kdv-run", kdv_run},               {"kdv-verify", kdv_verify},
      {"ns-majorant", ns_majorant_run}, {"tree-report", tree_report}};
  const auto it = table.find(config.command);
  if (it == table.end()) throw ConfigError("unknown experiment '" + config.command + "'");
  return it->second(config);
}

void write_outputs(const std::filesystem::path& out, const ExperimentConfig& config, const ExperimentResult& result) {
  std::filesystem::create_directories(out);
  auto write = [](const std::filesystem::path& file, const std::string& text) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    os << text;
  };
  write(out / (config.command + ".json"), result.report.dump(2) + "\n");
  for (const auto& t : result.tables) write(out / (t.name + ".csv"), to_csv(t));
}

std::string summary_text(const ExperimentConfig& config, const ExperimentResult& result) {
  std::ostringstream os;
  os << config.command << " (config " << config_hash(config) << ")\n";
  for (const auto& c : result.checks)
    os << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << " = " << format_number(c.value) << " (limit "
       << format_number(c.limit) << ")\n";
  if (const auto it = result.report.find("data"); it != result.report.end())
    for (const auto& [key, value] : it->items())
      if (value.is_primitive()) os << "  " << key << " = " << value.dump() << "\n";
  os << (result.passed ? "PASSED" : "FAILED") << "\n";
  return os.str();
}

}  // namespace roughtree
