#include "run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string_view>

namespace lifemax::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError(key + ": " + why);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) bad(key, "not a number: '" + t + "'");
  if (!std::isfinite(v)) bad(key, "must be finite");
  return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) bad(key, "not an integer: '" + t + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  bad(key, "expected true or false");
}

std::string one_of(const std::string& key, const std::string& text,
                   std::initializer_list<const char*> allowed) {
  const std::string t = trim(text);
  for (const char* a : allowed) {
    if (t == a) return t;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  bad(key, "expected one of " + list);
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

#define DBL(sec, name)                                                        \
  Field{#sec, #name, [](const RunConfig& c) { return format_double(c.sec.name); }, \
        [](RunConfig& c, const std::string& v) { c.sec.name = to_double(#sec "." #name, v); }}
#define INT(sec, name)                                                                \
  Field{#sec, #name, [](const RunConfig& c) { return std::to_string(c.sec.name); },   \
        [](RunConfig& c, const std::string& v) {                                      \
          c.sec.name = to_int<decltype(c.sec.name)>(#sec "." #name, v);                \
        }}
#define BOOL(sec, name)                                                                 \
  Field{#sec, #name, [](const RunConfig& c) { return std::string(c.sec.name ? "true" : "false"); }, \
        [](RunConfig& c, const std::string& v) { c.sec.name = to_bool(#sec "." #name, v); }}
#define STR(sec, name)                                             \
  Field{#sec, #name, [](const RunConfig& c) { return c.sec.name; }, \
        [](RunConfig& c, const std::string& v) { c.sec.name = trim(v); }}
#define ENUM(sec, name, ...)                                                    \
  Field{#sec, #name, [](const RunConfig& c) { return c.sec.name; },             \
        [](RunConfig& c, const std::string& v) {                                \
          c.sec.name = one_of(#sec "." #name, v, {__VA_ARGS__});                \
        }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      INT(topology, n),
      DBL(topology, radius),
      DBL(topology, comm_range),
      ENUM(topology, sink, "center", "random"),
      DBL(topology, alpha),
      DBL(topology, beta),
      DBL(topology, energy),
      DBL(topology, gen_rate),
      INT(topology, seed),
      INT(topology, max_attempts),
      ENUM(solver, algorithm, "lp", "admm", "subgrad"),
      DBL(solver, rho),
      DBL(solver, eps),
      DBL(solver, eps_dual),
      INT(solver, max_iter),
      ENUM(solver, objective, "linear", "quadratic"),
      ENUM(solver, init, "heuristic", "zero", "constant"),
      DBL(solver, init_value),
      DBL(solver, divergence_bound),
      BOOL(solver, early_stop),
      ENUM(solver, step_rule, "harmonic", "inverse_sqrt"),
      DBL(solver, step_a),
      DBL(solver, step_b),
      INT(solver, subgrad_max_iter),
      DBL(solver, gap_tol),
      INT(solver, stall_window),
      BOOL(solver, oracle),
      Field{"solver", "rho_grid",
            [](const RunConfig& c) {
              std::string out;
              for (double v : c.solver.rho_grid) out += (out.empty() ? "" : ",") + format_double(v);
              return out;
            },
            [](RunConfig& c, const std::string& v) { c.solver.rho_grid = parse_grid(v); }},
      INT(solver, budget),
      INT(solver, jobs),
      DBL(solver, target),
      STR(output, topology),
      STR(output, report),
      STR(output, trace),
      STR(output, sweep),
      STR(output, compare),
      STR(output, compare_json),
  };
  return table;
}

#undef DBL
#undef INT
#undef BOOL
#undef STR
#undef ENUM

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    out.push_back(to_double("solver.rho_grid", item));
  }
  if (out.empty()) bad("solver.rho_grid", "empty grid");
  return out;
}

void set_value(RunConfig& config, const std::string& section, const std::string& key,
               const std::string& value) {
  for (const Field& f : fields()) {
    if (section == f.section && key == f.key) {
      f.set(config, value);
      return;
    }
  }
  bad(section + "." + key, "unknown key");
}

void RunConfig::validate() const {
  const auto& t = topology;
  if (t.n < 1) bad("topology.n", "must be >= 1");
  if (!(t.radius > 0)) bad("topology.radius", "must be > 0");
  if (!(t.comm_range > 0)) bad("topology.comm_range", "must be > 0");
  if (!(t.alpha >= 0)) bad("topology.alpha", "must be >= 0");
  if (!(t.beta >= 0)) bad("topology.beta", "must be >= 0");
  if (!(t.energy > 0)) bad("topology.energy", "must be > 0");
  if (!(t.gen_rate >= 0)) bad("topology.gen_rate", "must be >= 0");
  if (t.max_attempts < 1) bad("topology.max_attempts", "must be >= 1");
  const auto& s = solver;
  if (!(s.rho > 0)) bad("solver.rho", "must be > 0");
  if (!(s.eps > 0)) bad("solver.eps", "must be > 0");
  if (!(s.eps_dual > 0)) bad("solver.eps_dual", "must be > 0");
  if (s.max_iter < 1) bad("solver.max_iter", "must be >= 1");
  if (!(s.divergence_bound > 0)) bad("solver.divergence_bound", "must be > 0");
  if (!(s.step_a > 0)) bad("solver.step_a", "must be > 0");
  if (!(s.step_b >= 0)) bad("solver.step_b", "must be >= 0");
  if (s.subgrad_max_iter < 1) bad("solver.subgrad_max_iter", "must be >= 1");
  if (!(s.gap_tol > 0)) bad("solver.gap_tol", "must be > 0");
  if (s.stall_window < 0) bad("solver.stall_window", "must be >= 0");
  for (double r : s.rho_grid) {
    if (!(r > 0)) bad("solver.rho_grid", "values must be > 0");
  }
  if (s.budget < 1) bad("solver.budget", "must be >= 1");
  if (s.jobs < 1) bad("solver.jobs", "must be >= 1");
  if (!(s.target > 0)) bad("solver.target", "must be > 0");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) bad(section, "key outside any section");
    if (section != "topology" && section != "solver" && section != "output") {
      bad(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      set_value(config, section, key, value.get_value<std::string>());
    }
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_ini(const RunConfig& config) {
  pt::ptree tree;
  for (const Field& f : fields()) {
    tree.put(pt::ptree::path_type(std::string(f.section) + "." + f.key), f.get(config));
  }
  std::ostringstream out;
  pt::write_ini(out, tree);
  return out.str();
}

}  // namespace lifemax::cli
