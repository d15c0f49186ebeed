#include "idsa/original.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "idsa/discretization.hpp"
#include "idsa/error.hpp"
#include "idsa/oracle.hpp"
#include "idsa/parallel.hpp"

namespace idsa {

namespace {

auto kappa_total_cells(const RadialGrid &grid, const ProblemSpec &spec) -> std::vector<double> {
  std::vector<double> k(grid.n_cells());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = spec.kappa_total(grid.center(i));
  return k;
}

auto full_stencil(const RadialGrid &grid, const ProblemSpec &spec, double kappa_floor) -> discrete::DiffusionStencil {
  const auto k = kappa_total_cells(grid, spec);
  return discrete::make_diffusion_stencil(grid, k, kappa_floor, discrete::OuterBoundary::ZeroGradient);
}

auto source_from(const discrete::DiffusionStencil &D, const RadialField &Jt, const RadialField &Js,
                 const ProblemSpec &spec) -> SourceResult {
  const auto &grid = Jt.grid();
  const auto d = D.apply(Jt.values());
  const std::size_t n = grid.n_cells();
  std::vector<double> sigma(n);
  std::vector<RegimeTag> tags(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ka = spec.kappa_a(grid.center(i));
    const double x = -d[i] + ka * Js[i];
    const double cap = ka * spec.B;
    if (x <= 0.0) {
      sigma[i] = 0.0;
      tags[i] = RegimeTag::Reaction;
    } else if (x >= cap) {
      sigma[i] = cap;
      tags[i] = RegimeTag::FreeStreaming;
    } else {
      sigma[i] = x;
      tags[i] = RegimeTag::Diffusion;
    }
  }
  return {RadialField(grid, std::move(sigma)), std::move(tags)};
}

// psi_k(z) = int_0^1 t^k e^{-z t} dt for k = 0, 1, 2 and z >= 0.
auto psi(int k, double z) -> double {
  if (z < 0.5) {
    double sum = 0.0;
    double term = 1.0;  // (-z)^j / j!
    for (int j = 0; j < 30; ++j) {
      sum += term / (k + j + 1);
      term *= -z / (j + 1);
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  const double e = std::exp(-z);
  switch (k) {
    case 0:
      return -std::expm1(-z) / z;
    case 1:
      return (1.0 - e * (1.0 + z)) / (z * z);
    default:
      return (2.0 - e * (z * z + 2.0 * z + 2.0)) / (z * z * z);
  }
}

// Flux r^2 g Js carried from a to b through a cell with constant sigma,
// kappa_a and g: Phi(b) = Phi(a) e^{-lambda L} + sigma int_a^b r^2 e^{-lambda (b - r)} dr.
auto advance_flux(double phi_a, double a, double b, double sigma, double lambda) -> double {
  const double L = b - a;
  const double z = lambda * L;
  const double i0 = L * psi(0, z);
  const double i1 = L * L * psi(1, z);
  const double i2 = L * L * L * psi(2, z);
  return phi_a * std::exp(-z) + sigma * (b * b * i0 - 2.0 * b * i1 + i2);
}

auto streaming_sweep(const RadialField &source, const ProblemSpec &spec) -> RadialField {
  const auto &grid = source.grid();
  const std::size_t n = grid.n_cells();
  std::vector<double> js(n);
  double phi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.center(i);
    const double g = free_streaming_flux_ratio(r, spec.R);
    const double lambda = spec.kappa_a(r) / g;
    const double phi_c = advance_flux(phi, grid.edge(i), r, source[i], lambda);
    js[i] = phi_c / (r * r * g);
    phi = advance_flux(phi, grid.edge(i), grid.edge(i + 1), source[i], lambda);
  }
  return RadialField(grid, std::move(js));
}

auto trapped_update(const RadialField &Jt, const RadialField &sigma, const ProblemSpec &spec, double dt)
    -> std::vector<double> {
  const auto &grid = Jt.grid();
  std::vector<double> out(grid.n_cells());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double ka = spec.kappa_a(grid.center(i));
    out[i] = (Jt[i] + dt * (ka * spec.B - sigma[i])) / (1.0 + dt * ka);
  }
  return out;
}

struct StepOutput {
  TwoComponentState state;
  std::vector<RegimeTag> tags;
  bool sigma_converged = true;
};

class OriginalSolver {
 public:
  OriginalSolver(const ProblemSpec &spec, const RadialGrid &grid, const SolverConfig &cfg)
      : spec_(spec), cfg_(cfg), D_(full_stencil(grid, spec, cfg.kappa_floor)) {}

  auto step(const TwoComponentState &s) const -> StepOutput {
    const double t = s.t + cfg_.dt;
    auto src = source_from(D_, s.Jt, s.Js, spec_);
    RadialField jt(s.Jt.grid(), trapped_update(s.Jt, src.sigma, spec_, cfg_.dt));
    if (!cfg_.sigma_lagging) return implicit_step(s, jt.values(), std::move(src.tags));
    check_nonnegative(jt, spec_.B, t, "Jt");
    auto js = streaming_sweep(src.sigma, spec_);
    check_nonnegative(js, spec_.B, t, "Js");
    return {{std::move(jt), std::move(js), t}, std::move(src.tags), true};
  }

 private:
  // Self-consistent sigma: find Jt^{n+1} whose own source
  // clip(-D[Jt^{n+1}] + kappa_a Js^n) drives the update. Diffusion cells
  // couple through the implicit diffusion term, the clipped cells are
  // pointwise. The regime tags are iterated (active-set) until they repeat;
  // the lagged step supplies the first guess.
  auto implicit_step(const TwoComponentState &s, std::span<const double> jt_guess,
                     std::vector<RegimeTag> tags) const -> StepOutput {
    const auto &grid = s.Jt.grid();
    const std::size_t n = grid.n_cells();
    const double dt = cfg_.dt;
    const double t = s.t + dt;
    const auto &W = D_.weights;
    std::vector<double> ka(n);
    for (std::size_t i = 0; i < n; ++i) ka[i] = spec_.kappa_a(grid.center(i));

    std::vector<double> jt(jt_guess.begin(), jt_guess.end());
    bool converged = false;
    for (int round = 0; round < 20 && !converged; ++round) {
      for (int it = 0; it < 4 && !converged; ++it) {
        discrete::Tridiagonal A(n);
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
          A.diag[i] = 1.0 + dt * ka[i];
          switch (tags[i]) {
            case RegimeTag::Diffusion:
              A.lower[i] = -dt * W.lower[i];
              A.diag[i] -= dt * W.diag[i];
              A.upper[i] = -dt * W.upper[i];
              rhs[i] = s.Jt[i] + dt * ka[i] * (spec_.B - s.Js[i]);
              break;
            case RegimeTag::Reaction:
              rhs[i] = s.Jt[i] + dt * ka[i] * spec_.B;
              break;
            case RegimeTag::FreeStreaming:
              rhs[i] = s.Jt[i];
              break;
          }
        }
        jt = discrete::solve(A, rhs);
        auto src = source_from(D_, RadialField(grid, jt), s.Js, spec_);
        converged = src.tags == tags;
        tags = std::move(src.tags);
      }
      if (converged) break;
      // the active set cycled: relax with exact per-cell solves, which
      // converge monotonically for this system, then retry
      gauss_seidel(s, ka, jt, 200);
      tags = source_from(D_, RadialField(grid, jt), s.Js, spec_).tags;
    }
    if (!converged) converged = gauss_seidel(s, ka, jt, 200000);

    RadialField jt_field(grid, std::move(jt));
    auto src = source_from(D_, jt_field, s.Js, spec_);
    check_nonnegative(jt_field, spec_.B, t, "Jt");
    auto js = streaming_sweep(src.sigma, spec_);
    check_nonnegative(js, spec_.B, t, "Js");
    return {{std::move(jt_field), std::move(js), t}, std::move(src.tags), converged};
  }

  // Nonlinear Gauss-Seidel on
  //   (1 + dt ka) u_i + dt clip(-D_i[u] + ka Js_i, 0, ka B) = Jt_i + dt ka B,
  // each cell solved exactly on its three linear branches.
  auto gauss_seidel(const TwoComponentState &s, const std::vector<double> &ka, std::vector<double> &u,
                    int max_sweeps) const -> bool {
    const auto &W = D_.weights;
    const double dt = cfg_.dt;
    const std::size_t n = u.size();
    const double tol = 1e-15 * std::max(spec_.B, 1e-300);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      double delta = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double a = 1.0 + dt * ka[i];
        const double b = s.Jt[i] + dt * ka[i] * spec_.B;
        const double w = -W.diag[i];
        double c = ka[i] * s.Js[i];
        if (i > 0) c -= W.lower[i] * u[i - 1];
        if (i + 1 < n) c -= W.upper[i] * u[i + 1];
        const double cap = ka[i] * spec_.B;
        double v = b / a;
        if (w * v + c > 0.0) {
          v = (b - dt * cap) / a;
          if (w * v + c < cap) v = (b - dt * c) / (a + dt * w);
        }
        delta = std::max(delta, std::abs(v - u[i]));
        u[i] = v;
      }
      if (delta <= tol) return true;
    }
    return false;
  }

  ProblemSpec spec_;
  SolverConfig cfg_;
  discrete::DiffusionStencil D_;
};

auto march(TwoComponentState initial, const ProblemSpec &spec, const SolverConfig &cfg,
           std::span<const double> snapshot_times, const StepObserver &observer, bool stop_when_stationary)
    -> Trajectory {
  spec.validate();
  cfg.validate();
  const auto grid = initial.Jt.grid();
  const OriginalSolver solver(spec, grid, cfg);

  std::vector<double> wanted(snapshot_times.begin(), snapshot_times.end());
  std::sort(wanted.begin(), wanted.end());
  const double slack = 1e-9 * cfg.dt;
  std::size_t next_snap = 0;

  auto tags0 = source_from(full_stencil(grid, spec, cfg.kappa_floor), initial.Jt, initial.Js, spec).tags;
  Trajectory traj{{}, Snapshot{std::move(initial), std::move(tags0)}};
  while (next_snap < wanted.size() && wanted[next_snap] <= traj.final.state.t + slack) {
    traj.snapshots.push_back(traj.final);
    ++next_snap;
  }

  const double t_stop = traj.final.state.t + cfg.t_end;
  while (traj.final.state.t < t_stop - 0.5 * cfg.dt) {
    auto out = solver.step(traj.final.state);
    if (!out.sigma_converged) ++traj.unconverged_sigma_steps;
    const double change = relative_change(traj.final.state, out.state);
    traj.final = {std::move(out.state), std::move(out.tags)};
    ++traj.steps;
    while (next_snap < wanted.size() && wanted[next_snap] <= traj.final.state.t + slack) {
      traj.snapshots.push_back(traj.final);
      ++next_snap;
    }
    if (observer && !observer(traj.final.state, traj.final.tags, change)) {
      traj.stopped = true;
      break;
    }
    if (stop_when_stationary && change < cfg.stationarity_tol) {
      traj.stationary = true;
      break;
    }
  }
  return traj;
}

}  // namespace

auto to_string(RegimeTag tag) -> const char * {
  switch (tag) {
    case RegimeTag::Reaction:
      return "reaction";
    case RegimeTag::Diffusion:
      return "diffusion";
    case RegimeTag::FreeStreaming:
      return "free-streaming";
  }
  return "?";
}

auto diffusion_term(const RadialField &Jt, const ProblemSpec &spec, double kappa_floor) -> RadialField {
  const auto D = full_stencil(Jt.grid(), spec, kappa_floor);
  return RadialField(Jt.grid(), D.apply(Jt.values()));
}

auto diffusion_source(const RadialField &Jt, const RadialField &Js, const ProblemSpec &spec, const RadialGrid &grid,
                      double kappa_floor) -> SourceResult {
  if (!(Jt.grid() == grid) || !(Js.grid() == grid)) throw InvalidArgument("diffusion_source: grid mismatch");
  return source_from(full_stencil(grid, spec, kappa_floor), Jt, Js, spec);
}

auto step_trapped(const TwoComponentState &state, const RadialField &sigma, const ProblemSpec &spec,
                  const SolverConfig &cfg) -> RadialField {
  cfg.validate();
  if (!(sigma.grid() == state.Jt.grid())) throw InvalidArgument("step_trapped: grid mismatch");
  RadialField jt(state.Jt.grid(), trapped_update(state.Jt, sigma, spec, cfg.dt));
  check_nonnegative(jt, spec.B, state.t + cfg.dt, "Jt");
  return jt;
}

auto solve_streaming_stationary(const RadialField &source, const ProblemSpec &spec, const RadialGrid &grid)
    -> RadialField {
  if (!(source.grid() == grid)) throw InvalidArgument("solve_streaming_stationary: grid mismatch");
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] < 0.0) throw InvalidArgument("solve_streaming_stationary: negative source");
  }
  auto js = streaming_sweep(source, spec);
  check_nonnegative(js, spec.B, 0.0, "Js");
  return js;
}

auto run_to_time(const ProblemSpec &spec, const RadialGrid &grid, const SolverConfig &cfg,
                 std::span<const double> snapshot_times, const StepObserver &observer) -> Trajectory {
  return march(zero_state(grid), spec, cfg, snapshot_times, observer, true);
}

auto run_from(TwoComponentState initial, const ProblemSpec &spec, const SolverConfig &cfg,
              std::span<const double> snapshot_times, const StepObserver &observer) -> Trajectory {
  return march(std::move(initial), spec, cfg, snapshot_times, observer, true);
}

auto run_spurious_trapped_experiment(std::span<const double> eps_list, const ProblemSpec &spec_base,
                                     const RadialGrid &grid, const SolverConfig &cfg, const SpuriousOptions &opt)
    -> std::vector<TakeoverResult> {
  for (double e : eps_list) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidArgument("spurious experiment: eps must be >= 0");
  }
  const std::size_t outside = grid.first_center_at_or_beyond(spec_base.R);
  if (outside == grid.n_cells()) throw InvalidArgument("spurious experiment: grid must extend beyond R");

  std::vector<TakeoverResult> results(eps_list.size());
  parallel_for(
      eps_list.size(),
      [&](std::size_t k) {
        const double eps = eps_list[k];
        TakeoverResult res{eps, 0.0, true, 0};
        const double horizon = opt.horizon > 0.0 ? opt.horizon : (eps > 0.0 ? 200.0 / eps : 0.0);
        if (horizon == 0.0) {
          // nothing is ever absorbed outside, so Jt stays zero there
          res.time = std::numeric_limits<double>::infinity();
          results[k] = res;
          return;
        }
        ProblemSpec spec = spec_base;
        spec.kappa_outside = eps;
        SolverConfig run_cfg = cfg;
        run_cfg.t_end = horizon;
        auto observer = [&](const TwoComponentState &s, std::span<const RegimeTag>, double change) {
          if (change >= opt.change_tol) return true;
          for (std::size_t i = outside; i < s.Jt.size(); ++i) {
            const double total = s.Jt[i] + s.Js[i];
            if (!(total > 0.0) || s.Jt[i] <= opt.trapped_fraction * total) return true;
          }
          res.time = s.t;
          res.censored = false;
          return false;
        };
        auto traj = march(zero_state(grid), spec, run_cfg, {}, observer, false);
        res.steps = traj.steps;
        if (res.censored) res.time = horizon;
        results[k] = res;
      },
      1);
  return results;
}

auto diagnose(const TwoComponentState &state, std::span<const RegimeTag> tags, const ProblemSpec &spec,
              const InstabilityOptions &opt) -> InstabilityDiagnostics {
  const auto &grid = state.Jt.grid();
  InstabilityDiagnostics d;
  d.t = state.t;
  const std::size_t n = grid.n_cells();
  const std::size_t inside = grid.first_center_at_or_beyond(spec.R);
  for (std::size_t i = n; i-- > 0;) {
    if (state.Jt[i] > opt.boundary_threshold * spec.B) {
      d.virtual_boundary = grid.center(i);
      break;
    }
  }
  for (std::size_t i = 0; i + 1 < inside; ++i) {
    if (state.Jt[i + 1] - state.Jt[i] > opt.monotone_tol * spec.B) {
      d.non_monotone = true;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) d.sup_norm = std::max(d.sup_norm, state.Jt[i] + state.Js[i]);
  for (std::size_t i = 0; i < std::min(inside, tags.size()); ++i) {
    if (tags[i] == RegimeTag::FreeStreaming) {
      d.streaming_onset = grid.center(i);
      break;
    }
  }
  return d;
}

auto run_instability_experiment(const ProblemSpec &spec, const RadialGrid &grid, const SolverConfig &cfg,
                                const InstabilityOptions &opt,
                                const std::function<void(const InstabilityDiagnostics &)> &on_snapshot)
    -> InstabilityReport {
  if (!(opt.snapshot_interval > 0.0)) throw InvalidArgument("instability: snapshot_interval must be positive");
  InstabilityReport rep;
  const auto every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opt.snapshot_interval / cfg.dt)));
  const double bound = spec.B * (1.0 + opt.bound_tol);
  std::size_t step = 0;

  auto record = [&](const InstabilityDiagnostics &d) {
    rep.snapshots.push_back(d);
    if (on_snapshot) on_snapshot(d);
  };

  auto observer = [&](const TwoComponentState &s, std::span<const RegimeTag> tags, double) {
    ++step;
    const auto d = diagnose(s, tags, spec, opt);
    rep.max_sup_norm = std::max(rep.max_sup_norm, d.sup_norm);
    if (d.non_monotone && rep.first_non_monotone_time < 0.0) rep.first_non_monotone_time = d.t;
    rep.peak_virtual_boundary = std::max(rep.peak_virtual_boundary, d.virtual_boundary);
    rep.final_virtual_boundary = d.virtual_boundary;
    if (d.sup_norm > bound) {
      record(d);
      throw UnboundedSolution("instability experiment: sup(Jt + Js) = " + std::to_string(d.sup_norm) +
                              " exceeds B(1 + " + std::to_string(opt.bound_tol) + ") at t = " + std::to_string(d.t));
    }
    if (step % every == 0) record(d);
    return true;
  };
  auto traj = march(zero_state(grid), spec, cfg, {}, observer, false);
  rep.steps = traj.steps;
  return rep;
}

}  // namespace idsa
