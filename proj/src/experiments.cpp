#include "idsa/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "idsa/diagnostics.hpp"
#include "idsa/error.hpp"
#include "idsa/oracle.hpp"
#include "idsa/original.hpp"
#include "idsa/reformed.hpp"
#include "json.hpp"

#ifndef IDSA_VERSION
#define IDSA_VERSION "0.0.0"
#endif

namespace idsa {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// A CSV body built in memory: `#` metadata, header, rows.
class Table {
 public:
  Table(const RunConfig &cfg, std::vector<std::string> columns) : columns_(std::move(columns)) {
    text_ = std::string("# idsa-lab ") + IDSA_VERSION + "\n";
    for (const auto &[k, v] : cfg.resolved) {
      if (k == "output_dir") continue;  // keeps files identical across output locations
      text_ += "# " + k + " = " + v + "\n";
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) text_ += (i ? "," : "") + columns_[i];
    text_ += '\n';
  }

  template <class... Cells>
  void row(const Cells &...cells) {
    std::string line;
    bool first = true;
    ((line += (first ? "" : ","), line += cell(cells), first = false), ...);
    text_ += line + "\n";
  }

  [[nodiscard]] auto str() const -> const std::string & { return text_; }

 private:
  static auto cell(double v) -> std::string { return format_number(v); }
  static auto cell(int v) -> std::string { return std::to_string(v); }
  static auto cell(std::size_t v) -> std::string { return std::to_string(v); }
  static auto cell(bool v) -> std::string { return v ? "1" : "0"; }
  static auto cell(const char *v) -> std::string { return v; }
  static auto cell(const std::string &v) -> std::string {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }

  std::vector<std::string> columns_;
  std::string text_;
};

struct Outputs {
  const RunConfig &cfg;
  std::vector<std::string> files;
  ordered_json results = ordered_json::object();

  void write(const std::string &name, const std::string &content) {
    write_atomically((fs::path(cfg.output_dir) / name).string(), content);
    files.push_back(name);
  }
};

auto fraction(double a, double b) -> double { return a + b > 0.0 ? a / (a + b) : std::nan(""); }

void profile_rows(Table &tab, const TwoComponentState &s, std::span<const RegimeTag> tags) {
  const auto &g = s.Jt.grid();
  for (std::size_t i = 0; i < g.n_cells(); ++i) {
    tab.row(s.t, g.center(i), s.Jt[i], s.Js[i], fraction(s.Jt[i], s.Js[i]), fraction(s.Js[i], s.Jt[i]),
            to_string(tags[i]));
  }
}

void reformed_rows(Table &tab, const TwoComponentState &s, double R) {
  const auto &g = s.Jt.grid();
  const auto rc = reconstruct_HK(s, make_closure_set(g, R));
  for (std::size_t i = 0; i < g.n_cells(); ++i) {
    const double h = rc.defined[i] ? rc.h[i] : std::nan("");
    const double k = rc.defined[i] ? rc.k[i] : std::nan("");
    tab.row(s.t, g.center(i), s.Jt[i], s.Js[i], fraction(s.Jt[i], s.Js[i]), fraction(s.Js[i], s.Jt[i]),
            g.center(i) < R ? "diffusion" : "free-streaming", rc.H[i], rc.K[i], h, k);
  }
}

auto fit_json(const FitResult &f) -> ordered_json {
  return {{"exponent", f.exponent}, {"intercept", f.intercept}, {"points_used", f.points_used}};
}

auto fit_text(const std::string &quantity, const FitResult &f) -> std::string {
  return "quantity = " + quantity + "\nexponent = " + format_number(f.exponent) +
         "\nintercept = " + format_number(f.intercept) + "\npoints_used = " + std::to_string(f.points_used) + "\n";
}

void run_oracle(Outputs &out) {
  const auto &c = out.cfg;
  const auto grid = make_uniform_grid(c.r_max, c.n_cells);
  const auto m = exact_moments(grid, c.spec, c.oracle_tol);
  Table tab(c, {"r", "J", "H", "K", "h", "k"});
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    const double J = m.J[i];
    const double h = J > 0.0 ? m.H[i] / J : std::nan("");
    const double k = J > 0.0 ? m.K[i] / J : std::nan("");
    tab.row(grid.center(i), J, m.H[i], m.K[i], h, k);
  }
  out.write("oracle.csv", tab.str());
  const auto sv = special_values(c.spec);
  out.results = {{"J0", sv.J0}, {"JR", sv.JR}, {"H0", sv.H0}, {"HR", sv.HR}};
}

void run_solve_idsa(Outputs &out, std::ostream &log) {
  const auto &c = out.cfg;
  const auto grid = make_uniform_grid(c.r_max, c.n_cells);
  const auto traj = run_to_time(c.spec, grid, c.solver, c.snapshot_times);
  Table tab(c, {"t", "r", "Jt", "Js", "h_t", "h_s", "regime"});
  for (const auto &snap : traj.snapshots) profile_rows(tab, snap.state, snap.tags);
  profile_rows(tab, traj.final.state, traj.final.tags);
  out.write("profiles.csv", tab.str());
  out.results = {{"final_time", traj.final.state.t},
                 {"steps", traj.steps},
                 {"stationary", traj.stationary},
                 {"unconverged_sigma_steps", traj.unconverged_sigma_steps}};
  log << "solve-idsa: " << traj.steps << " steps, stationary = " << traj.stationary << "\n";
}

void run_solve_reformed(Outputs &out, std::ostream &log, Variant variant) {
  const auto &c = out.cfg;
  const auto grid = make_uniform_grid(c.r_max, c.n_cells);
  const ReformedScheme scheme(variant, c.spec, grid, c.solver);
  std::vector<double> wanted = c.snapshot_times;
  std::sort(wanted.begin(), wanted.end());
  std::size_t next = 0;
  const double slack = 1e-9 * c.solver.dt;

  Table tab(c, {"t", "r", "Jt", "Js", "h_t", "h_s", "regime", "H", "K", "h", "k"});
  auto state = zero_state(grid);
  for (; next < wanted.size() && wanted[next] <= state.t + slack; ++next) reformed_rows(tab, state, c.spec.R);
  std::size_t steps = 0;
  bool stationary = false;
  double change = INFINITY;
  while (state.t < c.solver.t_end - 0.5 * c.solver.dt) {
    auto after = step_reformed(state, scheme);
    change = relative_change(state, after);
    state = std::move(after);
    ++steps;
    for (; next < wanted.size() && wanted[next] <= state.t + slack; ++next) reformed_rows(tab, state, c.spec.R);
    if (change < c.solver.stationarity_tol) {
      stationary = true;
      break;
    }
  }
  reformed_rows(tab, state, c.spec.R);
  out.write("profiles.csv", tab.str());

  const auto exact = exact_moments(grid, c.spec, c.oracle_tol);
  const auto rec = score_state(c.spec.kappa, state, c.spec.R, exact);
  out.results = {{"final_time", state.t}, {"steps", steps},   {"stationary", stationary},
                 {"last_change", change}, {"errJ", rec.errJ}, {"errH", rec.errH},
                 {"errK", rec.errK}};

  if (variant == Variant::New) {
    const auto closed = new_idsa_stationary_closed_form(grid, c.spec);
    Table ct(c, {"t", "r", "Jt", "Js", "h_t", "h_s", "regime", "H", "K", "h", "k"});
    reformed_rows(ct, closed, c.spec.R);
    out.write("closed_form.csv", ct.str());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
      const double w = grid.center(i) * grid.center(i);
      num += w * (std::pow(state.Jt[i] - closed.Jt[i], 2) + std::pow(state.Js[i] - closed.Js[i], 2));
      den += w * (closed.Jt[i] * closed.Jt[i] + closed.Js[i] * closed.Js[i]);
    }
    out.results["closed_form_discrepancy"] = den > 0.0 ? std::sqrt(num / den) : 0.0;
  }
  log << "solve-" << (variant == Variant::Old ? "old" : "new") << ": " << steps
      << " steps, stationary = " << stationary << ", errJ = " << format_number(rec.errJ) << "\n";
}

void run_spurious(Outputs &out, std::ostream &log) {
  const auto &c = out.cfg;
  const auto grid = make_uniform_grid(c.r_max, c.n_cells);
  const auto res = run_spurious_trapped_experiment(c.eps_list, c.spec, grid, c.solver, c.spurious);
  auto rows = res;
  std::sort(rows.begin(), rows.end(), [](auto &a, auto &b) { return a.eps > b.eps; });
  Table tab(c, {"eps", "time", "censored", "steps"});
  for (const auto &r : rows) tab.row(r.eps, r.time, r.censored, r.steps);
  out.write("takeover.csv", tab.str());

  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t censored = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].censored) ++censored;
    if (i < c.fit_exclude_largest || rows[i].censored || !(rows[i].eps > 0.0)) continue;
    xs.push_back(rows[i].eps);
    ys.push_back(rows[i].time);
  }
  out.results = {{"runs", rows.size()}, {"censored", censored}};
  if (xs.size() >= 2) {
    const auto fit = fit_power_law(xs, ys);
    out.write("fit.txt", fit_text("takeover_time", fit));
    out.results["fit"] = fit_json(fit);
    log << "spurious: takeover time ~ eps^" << format_number(fit.exponent) << " over " << fit.points_used
        << " points\n";
  } else {
    out.results["fit"] = nullptr;
    log << "spurious: too few uncensored points for a fit\n";
  }
}

void run_instability(Outputs &out, std::ostream &log) {
  const auto &c = out.cfg;
  const auto grid = make_uniform_grid(c.r_max, c.n_cells);
  std::vector<InstabilityDiagnostics> seen;
  auto flush = [&] {
    Table tab(c, {"t", "virtual_boundary", "non_monotone", "sup_norm", "streaming_onset"});
    for (const auto &d : seen) tab.row(d.t, d.virtual_boundary, d.non_monotone, d.sup_norm, d.streaming_onset);
    out.write("instability.csv", tab.str());
  };
  InstabilityReport rep;
  try {
    rep = run_instability_experiment(c.spec, grid, c.solver, c.instability,
                                     [&](const InstabilityDiagnostics &d) { seen.push_back(d); });
  } catch (const SolverFailure &) {
    flush();
    throw;
  }
  flush();
  out.results = {{"steps", rep.steps},
                 {"first_non_monotone_time", rep.first_non_monotone_time},
                 {"peak_virtual_boundary", rep.peak_virtual_boundary},
                 {"final_virtual_boundary", rep.final_virtual_boundary},
                 {"inward_shift", rep.inward_shift()},
                 {"max_sup_norm", rep.max_sup_norm}};
  log << "instability: first non-monotone at t = " << format_number(rep.first_non_monotone_time)
      << ", virtual boundary " << format_number(rep.peak_virtual_boundary) << " -> "
      << format_number(rep.final_virtual_boundary) << "\n";
}

auto run_convergence(Outputs &out, std::ostream &log) -> bool {
  const auto &c = out.cfg;
  const auto grid = make_uniform_grid(c.r_max, c.n_cells);
  SweepOptions opt;
  opt.cfg = c.solver;
  opt.oracle_tol = c.oracle_tol;
  opt.march_new = c.march_new;
  const auto sweep = convergence_sweep(c.kappa_list, c.spec.R, c.spec.B, grid, c.variant, opt);
  Table tab(c, {"kappa", "errJ", "errH", "errK"});
  for (const auto &r : sweep.records) tab.row(r.kappa, r.errJ, r.errH, r.errK);
  out.write("convergence.csv", tab.str());
  if (!sweep.failures.empty()) {
    Table ft(c, {"kappa", "kind", "message"});
    for (const auto &f : sweep.failures) ft.row(f.kappa, f.kind, f.message);
    out.write("failures.csv", ft.str());
  }

  out.results = {{"points", sweep.records.size()}, {"failures", sweep.failures.size()}};
  if (sweep.records.size() >= 2) {
    std::vector<double> k;
    std::vector<double> e[3];
    for (const auto &r : sweep.records) {
      k.push_back(r.kappa);
      e[0].push_back(r.errJ);
      e[1].push_back(r.errH);
      e[2].push_back(r.errK);
    }
    const char *names[3] = {"errJ", "errH", "errK"};
    std::string text;
    ordered_json fits = ordered_json::object();
    for (int q = 0; q < 3; ++q) {
      try {
        const auto fit = fit_power_law(k, e[q]);
        text += fit_text(names[q], fit) + "\n";
        fits[names[q]] = fit_json(fit);
        log << "convergence: " << names[q] << " ~ kappa^" << format_number(fit.exponent) << "\n";
      } catch (const DomainError &) {
        fits[names[q]] = nullptr;  // an exactly zero error cannot be fitted
      }
    }
    out.write("fit.txt", text);
    out.results["fit"] = fits;
  }
  return sweep.failures.empty();
}

void run_err0(Outputs &out) {
  const auto &c = out.cfg;
  Table tab(c, {"kappaR", "err0"});
  for (const auto &p : err0_curve(c.kappaR_list)) tab.row(p.kappaR, p.err0);
  out.write("err0.csv", tab.str());
}

auto base_manifest(const RunConfig &c) -> ordered_json {
  ordered_json params = ordered_json::object();
  for (const auto &[k, v] : c.resolved) params[k] = v;
  return {{"tool", "idsa-lab"}, {"version", IDSA_VERSION}, {"experiment", to_string(c.experiment)},
          {"parameters", params}};
}

}  // namespace

auto exit_code_for(const std::exception &e) -> int {
  if (dynamic_cast<const ConfigError *>(&e)) return kExitConfig;
  if (dynamic_cast<const IoError *>(&e)) return kExitIo;
  if (dynamic_cast<const InvalidArgument *>(&e) || dynamic_cast<const DomainError *>(&e)) return kExitConfig;
  return kExitSolver;
}

auto error_record(const std::exception &e) -> std::string {
  ordered_json j;
  j["status"] = "failed";
  const auto *err = dynamic_cast<const Error *>(&e);
  j["kind"] = err ? err->kind() : "internal";
  j["exit_code"] = exit_code_for(e);
  j["message"] = e.what();
  if (const auto *ce = dynamic_cast<const ConfigError *>(&e)) j["key"] = ce->key();
  if (const auto *ne = dynamic_cast<const NegativityError *>(&e)) {
    j["time"] = ne->time();
    j["cell"] = ne->cell();
    j["value"] = ne->value();
  }
  if (const auto *qe = dynamic_cast<const QuadratureFailure *>(&e)) {
    j["cell"] = qe->worst_cell();
    j["error_estimate"] = qe->worst_error();
  }
  return j.dump(2) + "\n";
}

void write_atomically(const std::string &path, const std::string &content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename " + tmp.string() + " to " + target.string());
  }
}

auto run(const RunConfig &config, std::ostream &log) -> int {
  Outputs out{config, {}, ordered_json::object()};
  auto manifest = base_manifest(config);
  try {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir)) throw IoError("cannot create output directory " + config.output_dir);
    // a stale record from an earlier failed run would be misleading
    fs::remove(fs::path(config.output_dir) / "error.json", ec);
  } catch (const std::exception &e) {
    std::fputs(error_record(e).c_str(), stderr);
    return exit_code_for(e);
  }

  int code = kExitOk;
  std::string error;
  try {
    switch (config.experiment) {
      case Experiment::Oracle:
        run_oracle(out);
        break;
      case Experiment::SolveIdsa:
        run_solve_idsa(out, log);
        break;
      case Experiment::SolveOld:
        run_solve_reformed(out, log, Variant::Old);
        break;
      case Experiment::SolveNew:
        run_solve_reformed(out, log, Variant::New);
        break;
      case Experiment::Spurious:
        run_spurious(out, log);
        break;
      case Experiment::Instability:
        run_instability(out, log);
        break;
      case Experiment::Convergence:
        if (!run_convergence(out, log)) {
          code = kExitSolver;
          ordered_json j = {{"status", "failed"},
                            {"kind", "partial-sweep"},
                            {"exit_code", code},
                            {"message", "some sweep points failed, see failures.csv"}};
          error = j.dump(2) + "\n";
        }
        break;
      case Experiment::Err0:
        run_err0(out);
        break;
    }
  } catch (const std::exception &e) {
    code = exit_code_for(e);
    error = error_record(e);
  }

  manifest["status"] = code == kExitOk ? "ok" : "failed";
  manifest["outputs"] = out.files;
  manifest["results"] = out.results;
  try {
    if (!error.empty()) write_atomically((fs::path(config.output_dir) / "error.json").string(), error);
    write_atomically((fs::path(config.output_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  } catch (const std::exception &e) {
    std::fputs(error_record(e).c_str(), stderr);
    return kExitIo;
  }
  if (!error.empty()) std::fputs(error.c_str(), stderr);
  return code;
}

}  // namespace idsa
