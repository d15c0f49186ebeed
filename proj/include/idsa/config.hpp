#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idsa/grid.hpp"
#include "idsa/original.hpp"
#include "idsa/reformed.hpp"
#include "idsa/state.hpp"

namespace idsa {

enum class Experiment { Oracle, SolveIdsa, SolveOld, SolveNew, Spurious, Instability, Convergence, Err0 };

auto to_string(Experiment e) -> const char *;

/// Everything one `idsa-lab run` needs, with every default resolved.
struct RunConfig {
  Experiment experiment = Experiment::Oracle;
  ProblemSpec spec;
  double r_max = 18.0;
  std::size_t n_cells = 2000;
  SolverConfig solver;
  std::string output_dir = "out";
  std::vector<double> snapshot_times;

  Variant variant = Variant::New;
  std::vector<double> kappa_list;
  std::vector<double> eps_list;
  std::vector<double> kappaR_list;
  double oracle_tol = 1e-10;
  bool march_new = false;
  SpuriousOptions spurious;
  std::size_t fit_exclude_largest = 5;
  InstabilityOptions instability;

  /// (key, value) for every key, in the order of config_keys(), with the
  /// value actually used.
  std::vector<std::pair<std::string, std::string>> resolved;
};

struct ConfigKey {
  const char *name;
  const char *default_text;
  const char *help;
};

/// Every accepted key with its default and a one-line description.
auto config_keys() -> const std::vector<ConfigKey> &;

/// Parses flat `key = value` lines (`#` starts a comment), applies the
/// `overrides` on top and fills the defaults. Throws ConfigError naming
/// the key for an unknown or repeated key, an unparsable or invalid value,
/// or a missing `experiment`.
auto parse_config(std::string_view text, const std::vector<std::pair<std::string, std::string>> &overrides = {})
    -> RunConfig;

/// Splits "key=value" into its parts; ConfigError when there is no '='.
auto split_override(std::string_view kv) -> std::pair<std::string, std::string>;

/// The key table rendered for --help.
auto config_help() -> std::string;

/// 17 significant digits; inf, -inf or nan for non-finite values.
auto format_number(double v) -> std::string;

}  // namespace idsa
