#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lifemax::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Effective settings of one CLI run. Loaded from an INI document with
/// sections [topology], [solver] and [output]; flags override afterwards.
struct RunConfig {
  struct TopologySection {
    int n = 15;
    double radius = 100.0;
    double comm_range = 40.0;
    std::string sink = "center";  // center | random
    double alpha = 0.5;
    double beta = 0.001;
    double energy = 1.0;
    double gen_rate = 1.0;
    std::uint64_t seed = 0;
    int max_attempts = 200000;
  } topology;

  struct SolverSection {
    std::string algorithm = "admm";  // lp | admm | subgrad
    double rho = 7.0;
    double eps = 0.01;
    double eps_dual = 0.01;
    int max_iter = 500;
    std::string objective = "linear";  // linear | quadratic
    std::string init = "heuristic";    // heuristic | zero | constant
    double init_value = 1.0;
    double divergence_bound = 1e12;
    bool early_stop = true;
    std::string step_rule = "harmonic";  // harmonic | inverse_sqrt
    double step_a = 1.0;
    double step_b = 0.0;
    int subgrad_max_iter = 5000;
    double gap_tol = 0.05;
    int stall_window = 500;
    bool oracle = false;  // attach q* and, for subgrad, stop on the oracle gap
    std::vector<double> rho_grid{0.1, 1.0, 7.0, 50.0, 500.0};
    int budget = 200;
    int jobs = 1;
    double target = 0.05;
  } solver;

  struct OutputSection {
    std::string topology = "topo.json";
    std::string report = "report.json";
    std::string trace = "trace.csv";
    std::string sweep = "sweep.csv";
    std::string compare = "compare.csv";
    std::string compare_json = "compare.json";
  } output;

  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// Parses INI text. Unknown sections or keys, malformed numbers and
/// out-of-range values raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical INI form; parse_config(to_ini(c)) reproduces c exactly.
std::string to_ini(const RunConfig& config);

/// Applies a single "section.key=value" style assignment.
void set_value(RunConfig& config, const std::string& section, const std::string& key,
               const std::string& value);

std::string format_double(double v);
std::vector<double> parse_grid(const std::string& text);

}  // namespace lifemax::cli
