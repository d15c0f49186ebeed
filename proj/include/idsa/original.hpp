#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "idsa/grid.hpp"
#include "idsa/state.hpp"

namespace idsa {

/// Which branch of the min-max diffusion source was active in a cell.
enum class RegimeTag : std::uint8_t {
  Reaction,       ///< inner max clipped to 0
  Diffusion,      ///< neither bound active
  FreeStreaming,  ///< outer min clipped to kappa_a B
};

auto to_string(RegimeTag tag) -> const char *;

struct SourceResult {
  RadialField sigma;
  std::vector<RegimeTag> tags;
};

/// Discrete (1/r^2) d/dr( r^2/(3 kappa) dJ/dr ) on the full grid, with
/// kappa = kappa_a + kappa_s, no flux through r = 0 or r = r_max.
auto diffusion_term(const RadialField &Jt, const ProblemSpec &spec, double kappa_floor = 1e-30) -> RadialField;

/// Sigma_i = min(max(-D_i[Jt] + kappa_a Js_i, 0), kappa_a B) with its regime.
auto diffusion_source(const RadialField &Jt, const RadialField &Js, const ProblemSpec &spec, const RadialGrid &grid,
                      double kappa_floor = 1e-30) -> SourceResult;

/// Backward-Euler trapped update (Jt + dt (kappa_a B - sigma)) / (1 + dt kappa_a).
/// Values below -1e-12 B raise NegativityError at time state.t + dt.
auto step_trapped(const TwoComponentState &state, const RadialField &sigma, const ProblemSpec &spec,
                  const SolverConfig &cfg) -> RadialField;

/// Stationary streaming component from (1/r^2) d/dr(r^2 g Js) = sigma - kappa_a Js,
/// swept outward from zero flux at r = 0. Within each cell sigma, kappa_a
/// and g are frozen and the flux ODE is integrated exactly, so the sweep is
/// positive for any kappa_a dr.
auto solve_streaming_stationary(const RadialField &source, const ProblemSpec &spec, const RadialGrid &grid)
    -> RadialField;

struct Snapshot {
  TwoComponentState state;
  std::vector<RegimeTag> tags;
};

/// Called after every step with the new state, its regime tags and the
/// relative change of the step. Returning false stops the run.
using StepObserver = std::function<bool(const TwoComponentState &, std::span<const RegimeTag>, double)>;

struct Trajectory {
  std::vector<Snapshot> snapshots;  ///< one per requested time reached
  Snapshot final;
  std::size_t steps = 0;
  bool stationary = false;
  bool stopped = false;  ///< the observer asked to stop
  std::size_t unconverged_sigma_steps = 0;  ///< fixed-point mode only
};

/// Marches the original IDSA from zero data. Each step evaluates sigma from
/// the current state, updates Jt and then solves for Js with the same
/// sigma. With cfg.sigma_lagging == false the trapped update instead uses
/// the sigma of its own result (Js still from the previous step), solved
/// exactly by an active-set iteration with a Gauss-Seidel fallback. Stops
/// at cfg.t_end or once the relative change of a step is below
/// cfg.stationarity_tol.
auto run_to_time(const ProblemSpec &spec, const RadialGrid &grid, const SolverConfig &cfg,
                 std::span<const double> snapshot_times = {}, const StepObserver &observer = {}) -> Trajectory;

/// Same, starting from a given state.
auto run_from(TwoComponentState initial, const ProblemSpec &spec, const SolverConfig &cfg,
              std::span<const double> snapshot_times = {}, const StepObserver &observer = {}) -> Trajectory;

// -- experiments ------------------------------------------------------------------

struct TakeoverResult {
  double eps = 0.0;
  double time = 0.0;  ///< takeover time, or the horizon when censored
  bool censored = false;
  std::size_t steps = 0;
};

struct SpuriousOptions {
  double horizon = 0.0;  ///< 0 selects 200 / eps per run
  double change_tol = 1e-8;
  double trapped_fraction = 0.5;
};

/// For each eps, runs spec_base with kappa_outside = eps and reports the
/// first time at which Jt / (Jt + Js) > trapped_fraction on every cell
/// beyond R and the step's relative change is below change_tol.
auto run_spurious_trapped_experiment(std::span<const double> eps_list, const ProblemSpec &spec_base,
                                     const RadialGrid &grid, const SolverConfig &cfg, const SpuriousOptions &opt = {})
    -> std::vector<TakeoverResult>;

struct InstabilityDiagnostics {
  double t = 0.0;
  double virtual_boundary = 0.0;  ///< largest centre with Jt > threshold (0 if none)
  bool non_monotone = false;      ///< some Jt_{i+1} - Jt_i > monotone_tol inside R
  double sup_norm = 0.0;          ///< max (Jt + Js)
  double streaming_onset = -1.0;  ///< innermost free-streaming cell below R, -1 if none
};

struct InstabilityOptions {
  double snapshot_interval = 10.0;
  /// Relative to B. Cells caught in the lagged min-max two-cycle oscillate
  /// between B/(2 + dt) and B(1 + dt)/(2 + dt), so any threshold above 2/3
  /// separates them from an intact trapped core for dt <= 1.
  double boundary_threshold = 0.75;
  double monotone_tol = 1e-12;  ///< relative to B
  double bound_tol = 1e-6;      ///< sup(Jt + Js) <= B (1 + bound_tol)
};

struct InstabilityReport {
  std::vector<InstabilityDiagnostics> snapshots;
  double first_non_monotone_time = -1.0;  ///< -1 if never
  double peak_virtual_boundary = 0.0;     ///< largest value seen over the run
  double final_virtual_boundary = 0.0;
  double max_sup_norm = 0.0;
  std::size_t steps = 0;

  /// How far the virtual boundary retreated from its outermost position.
  [[nodiscard]] auto inward_shift() const -> double { return peak_virtual_boundary - final_virtual_boundary; }
};

auto diagnose(const TwoComponentState &state, std::span<const RegimeTag> tags, const ProblemSpec &spec,
              const InstabilityOptions &opt) -> InstabilityDiagnostics;

/// Runs the original IDSA to cfg.t_end (stationarity does not stop it),
/// checking every step. `on_snapshot` sees each periodic snapshot as it is
/// taken. Throws UnboundedSolution as soon as sup(Jt + Js) exceeds the bound.
auto run_instability_experiment(const ProblemSpec &spec, const RadialGrid &grid, const SolverConfig &cfg,
                                const InstabilityOptions &opt = {},
                                const std::function<void(const InstabilityDiagnostics &)> &on_snapshot = {})
    -> InstabilityReport;

}  // namespace idsa
