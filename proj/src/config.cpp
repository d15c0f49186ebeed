#include "idsa/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "idsa/error.hpp"

namespace idsa {

namespace {

constexpr const char *kExperimentNames[] = {"oracle",     "solve-idsa",  "solve-old",   "solve-new",
                                            "spurious",   "instability", "convergence", "err0"};

auto trim(std::string_view s) -> std::string_view {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

auto parse_double(const std::string &key, std::string_view text) -> double {
  text = trim(text);
  double v = 0.0;
  const auto *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

auto parse_count(const std::string &key, std::string_view text) -> std::size_t {
  text = trim(text);
  std::size_t v = 0;
  const auto *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

auto parse_bool(const std::string &key, std::string_view text) -> bool {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
}

auto parse_list(const std::string &key, std::string_view text) -> std::vector<double> {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}

auto join(const std::vector<double> &xs) -> std::string {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += format_number(xs[i]);
  }
  return s;
}

void require(bool ok, const std::string &key, const std::string &what) {
  if (!ok) throw ConfigError(key, what);
}

auto default_eps_list() -> std::vector<double> {
  std::vector<double> eps;
  for (int k = 0; k <= 12; ++k) eps.push_back(std::pow(10.0, -1.0 - 0.25 * k));
  return eps;
}

auto default_cells(Experiment e) -> std::size_t {
  switch (e) {
    case Experiment::Spurious:
      return 50;
    case Experiment::Instability:
      return 10000;
    case Experiment::Convergence:
      return 20000;
    default:
      return 2000;
  }
}

}  // namespace

auto to_string(Experiment e) -> const char * { return kExperimentNames[static_cast<int>(e)]; }

auto format_number(double v) -> std::string {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw InternalError("format_number: buffer too small");
  return {buf, ptr};
}

auto config_keys() -> const std::vector<ConfigKey> & {
  static const std::vector<ConfigKey> keys = {
      {"experiment", "(required)",
       "oracle | solve-idsa | solve-old | solve-new | spurious | instability | convergence | err0"},
      {"B", "1", "equilibrium intensity"},
      {"R", "6", "sphere radius"},
      {"kappa", "1", "absorption opacity inside R"},
      {"kappa_outside", "0", "absorption opacity beyond R (replaced by each eps for spurious)"},
      {"kappa_s", "0", "scattering opacity"},
      {"r_max", "3R", "outer edge of the grid"},
      {"n_cells", "per experiment", "oracle/solve 2000, spurious 50, instability 10000, convergence 20000"},
      {"dt", "0.1", "time step"},
      {"t_end", "per experiment", "final time: instability 1000, otherwise 1e4"},
      {"stationarity_tol", "1e-10", "relative change per step that counts as stationary"},
      {"sigma_lagging", "per experiment",
       "evaluate the diffusion source from the previous step: false for spurious, otherwise true"},
      {"kappa_floor", "1e-30", "lower bound on kappa in the diffusion coefficient"},
      {"output_dir", "out", "directory receiving the CSV files and manifest.json"},
      {"snapshot_times", "", "comma-separated times at which solve-* runs write profiles"},
      {"variant", "new", "old | new (convergence)"},
      {"kappa_list", "1,2,5,10,20,50,100", "opacities of the convergence sweep"},
      {"eps_list", "13 values 10^(-1 - k/4)", "outside opacities of the spurious experiment"},
      {"kappaR_list", "0.1,0.2,0.5,1,2,4,6,10,20,50,100", "kappa R values of the err0 curve"},
      {"oracle_tol", "1e-10", "quadrature tolerance of the exact moments"},
      {"march_new", "false", "time-march the New IDSA in the convergence sweep instead of the closed form"},
      {"takeover_horizon", "0", "spurious: give up at this time, 0 meaning 200/eps"},
      {"takeover_change_tol", "1e-8", "spurious: relative change per step required for takeover"},
      {"trapped_fraction", "0.5", "spurious: Jt/(Jt+Js) required beyond R for takeover"},
      {"fit_exclude_largest", "5", "spurious: largest eps values left out of the slope fit"},
      {"snapshot_interval", "10", "instability: time between diagnostic rows"},
      {"boundary_threshold", "0.75", "instability: Jt/B level defining the virtual boundary"},
      {"monotone_tol", "1e-12", "instability: rise of Jt/B between cells flagged as non-monotone"},
      {"bound_tol", "1e-6", "instability: allowed excess of sup(Jt+Js) over B"},
  };
  return keys;
}

auto split_override(std::string_view kv) -> std::pair<std::string, std::string> {
  const auto eq = kv.find('=');
  if (eq == std::string_view::npos) throw ConfigError(std::string(trim(kv)), "override must look like key=value");
  return {std::string(trim(kv.substr(0, eq))), std::string(trim(kv.substr(eq + 1)))};
}

auto parse_config(std::string_view text, const std::vector<std::pair<std::string, std::string>> &overrides)
    -> RunConfig {
  std::map<std::string, std::string> known;
  for (const auto &k : config_keys()) known.emplace(k.name, "");
  std::map<std::string, std::string> raw;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), "line " + std::to_string(line_no) + " is not of the form key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    if (!known.count(key)) throw ConfigError(key, "unknown key");
    if (raw.count(key)) throw ConfigError(key, "given twice");
    raw[key] = std::string(trim(line.substr(eq + 1)));
  }
  for (const auto &[key, value] : overrides) {
    if (!known.count(key)) throw ConfigError(key, "unknown key");
    raw[key] = value;
  }

  RunConfig c;
  auto has = [&](const char *k) { return raw.count(k) != 0; };
  auto num = [&](const char *k, double def) { return has(k) ? parse_double(k, raw[k]) : def; };

  if (!has("experiment") || raw["experiment"].empty()) throw ConfigError("experiment", "missing");
  {
    bool found = false;
    for (int i = 0; i < 8; ++i) {
      if (raw["experiment"] == kExperimentNames[i]) {
        c.experiment = static_cast<Experiment>(i);
        found = true;
      }
    }
    require(found, "experiment", "unknown experiment '" + raw["experiment"] + "'");
  }
  const Experiment ex = c.experiment;

  c.spec.B = num("B", 1.0);
  require(c.spec.B >= 0.0, "B", "must be >= 0");
  c.spec.R = num("R", 6.0);
  require(c.spec.R > 0.0, "R", "must be > 0");
  c.spec.kappa = num("kappa", 1.0);
  require(c.spec.kappa > 0.0, "kappa", "must be > 0");
  c.spec.kappa_outside = num("kappa_outside", 0.0);
  require(c.spec.kappa_outside >= 0.0, "kappa_outside", "must be >= 0");
  c.spec.kappa_s = num("kappa_s", 0.0);
  require(c.spec.kappa_s >= 0.0, "kappa_s", "must be >= 0");

  c.r_max = num("r_max", 3.0 * c.spec.R);
  require(c.r_max > 0.0, "r_max", "must be > 0");
  if (ex != Experiment::Oracle && ex != Experiment::Err0) {
    require(c.r_max > c.spec.R, "r_max", "must exceed R for this experiment");
  }
  c.n_cells = has("n_cells") ? parse_count("n_cells", raw["n_cells"]) : default_cells(ex);
  require(c.n_cells >= 2, "n_cells", "must be >= 2");

  c.solver.dt = num("dt", 0.1);
  require(c.solver.dt > 0.0, "dt", "must be > 0");
  c.solver.t_end = num("t_end", ex == Experiment::Instability ? 1000.0 : 1e4);
  require(c.solver.t_end >= 0.0, "t_end", "must be >= 0");
  c.solver.stationarity_tol = num("stationarity_tol", 1e-10);
  require(c.solver.stationarity_tol > 0.0, "stationarity_tol", "must be > 0");
  c.solver.sigma_lagging =
      has("sigma_lagging") ? parse_bool("sigma_lagging", raw["sigma_lagging"]) : ex != Experiment::Spurious;
  c.solver.kappa_floor = num("kappa_floor", 1e-30);
  require(c.solver.kappa_floor > 0.0, "kappa_floor", "must be > 0");

  c.output_dir = has("output_dir") ? raw["output_dir"] : "out";
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
  c.snapshot_times = has("snapshot_times") ? parse_list("snapshot_times", raw["snapshot_times"]) : std::vector<double>{};
  for (double t : c.snapshot_times) require(t >= 0.0, "snapshot_times", "times must be >= 0");

  if (has("variant")) {
    const auto &v = raw["variant"];
    require(v == "old" || v == "new", "variant", "expected old or new, got '" + v + "'");
    c.variant = v == "old" ? Variant::Old : Variant::New;
  }
  c.kappa_list = has("kappa_list") ? parse_list("kappa_list", raw["kappa_list"])
                                   : std::vector<double>{1, 2, 5, 10, 20, 50, 100};
  require(!c.kappa_list.empty(), "kappa_list", "must not be empty");
  for (double k : c.kappa_list) require(k > 0.0, "kappa_list", "values must be > 0");
  c.eps_list = has("eps_list") ? parse_list("eps_list", raw["eps_list"]) : default_eps_list();
  require(!c.eps_list.empty(), "eps_list", "must not be empty");
  for (double e : c.eps_list) require(e >= 0.0, "eps_list", "values must be >= 0");
  c.kappaR_list = has("kappaR_list") ? parse_list("kappaR_list", raw["kappaR_list"])
                                     : std::vector<double>{0.1, 0.2, 0.5, 1, 2, 4, 6, 10, 20, 50, 100};
  require(!c.kappaR_list.empty(), "kappaR_list", "must not be empty");
  for (double x : c.kappaR_list) require(x > 0.0, "kappaR_list", "values must be > 0");

  c.oracle_tol = num("oracle_tol", 1e-10);
  require(c.oracle_tol > 0.0, "oracle_tol", "must be > 0");
  c.march_new = has("march_new") && parse_bool("march_new", raw["march_new"]);

  c.spurious.horizon = num("takeover_horizon", 0.0);
  require(c.spurious.horizon >= 0.0, "takeover_horizon", "must be >= 0");
  c.spurious.change_tol = num("takeover_change_tol", 1e-8);
  require(c.spurious.change_tol > 0.0, "takeover_change_tol", "must be > 0");
  c.spurious.trapped_fraction = num("trapped_fraction", 0.5);
  require(c.spurious.trapped_fraction > 0.0 && c.spurious.trapped_fraction < 1.0, "trapped_fraction",
          "must lie in (0, 1)");
  c.fit_exclude_largest = has("fit_exclude_largest") ? parse_count("fit_exclude_largest", raw["fit_exclude_largest"]) : 5;

  c.instability.snapshot_interval = num("snapshot_interval", 10.0);
  require(c.instability.snapshot_interval > 0.0, "snapshot_interval", "must be > 0");
  c.instability.boundary_threshold = num("boundary_threshold", 0.75);
  require(c.instability.boundary_threshold > 0.0, "boundary_threshold", "must be > 0");
  c.instability.monotone_tol = num("monotone_tol", 1e-12);
  require(c.instability.monotone_tol >= 0.0, "monotone_tol", "must be >= 0");
  c.instability.bound_tol = num("bound_tol", 1e-6);
  require(c.instability.bound_tol >= 0.0, "bound_tol", "must be >= 0");

  c.resolved = {
      {"experiment", to_string(ex)},
      {"B", format_number(c.spec.B)},
      {"R", format_number(c.spec.R)},
      {"kappa", format_number(c.spec.kappa)},
      {"kappa_outside", format_number(c.spec.kappa_outside)},
      {"kappa_s", format_number(c.spec.kappa_s)},
      {"r_max", format_number(c.r_max)},
      {"n_cells", std::to_string(c.n_cells)},
      {"dt", format_number(c.solver.dt)},
      {"t_end", format_number(c.solver.t_end)},
      {"stationarity_tol", format_number(c.solver.stationarity_tol)},
      {"sigma_lagging", c.solver.sigma_lagging ? "true" : "false"},
      {"kappa_floor", format_number(c.solver.kappa_floor)},
      {"output_dir", c.output_dir},
      {"snapshot_times", join(c.snapshot_times)},
      {"variant", c.variant == Variant::Old ? "old" : "new"},
      {"kappa_list", join(c.kappa_list)},
      {"eps_list", join(c.eps_list)},
      {"kappaR_list", join(c.kappaR_list)},
      {"oracle_tol", format_number(c.oracle_tol)},
      {"march_new", c.march_new ? "true" : "false"},
      {"takeover_horizon", format_number(c.spurious.horizon)},
      {"takeover_change_tol", format_number(c.spurious.change_tol)},
      {"trapped_fraction", format_number(c.spurious.trapped_fraction)},
      {"fit_exclude_largest", std::to_string(c.fit_exclude_largest)},
      {"snapshot_interval", format_number(c.instability.snapshot_interval)},
      {"boundary_threshold", format_number(c.instability.boundary_threshold)},
      {"monotone_tol", format_number(c.instability.monotone_tol)},
      {"bound_tol", format_number(c.instability.bound_tol)},
  };
  return c;
}

auto config_help() -> std::string {
  std::string out = "Configuration keys (flat `key = value` lines, `#` comments):\n";
  for (const auto &k : config_keys()) {
    std::string head = std::string("  ") + k.name;
    if (head.size() < 24) head.resize(24, ' ');
    out += head + "default: " + (k.default_text[0] ? k.default_text : "(empty)") + "\n";
    out += std::string(24, ' ') + k.help + "\n";
  }
  return out;
}

}  // namespace idsa
