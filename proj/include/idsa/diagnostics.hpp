#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "idsa/grid.hpp"
#include "idsa/oracle.hpp"
#include "idsa/reformed.hpp"
#include "idsa/state.hpp"

namespace idsa {

/// Shell-weighted relative L2 errors of J, H and K at one opacity.
struct ConvergenceRecord {
  double kappa = 0.0;
  double errJ = 0.0;
  double errH = 0.0;
  double errK = 0.0;
};

struct SweepFailure {
  double kappa = 0.0;
  std::string kind;
  std::string message;
};

/// Records of the opacities that succeeded and the ones that did not, both
/// sorted by kappa.
struct SweepResult {
  std::vector<ConvergenceRecord> records;
  std::vector<SweepFailure> failures;
};

struct SweepOptions {
  /// Controls the time-marched runs (Old always, New when `march_new`).
  SolverConfig cfg;
  double oracle_tol = 1e-10;
  /// Use the time-marched New IDSA instead of its closed form.
  bool march_new = false;
};

/// Errors of approximate moments against exact ones on the same grid.
auto score_moments(double kappa, const MomentTriple &approx, const MomentTriple &exact) -> ConvergenceRecord;

/// J = Jt + Js and the H, K reconstructed with the closures split at R,
/// scored against `exact`.
auto score_state(double kappa, const TwoComponentState &state, double R, const MomentTriple &exact)
    -> ConvergenceRecord;

/// Stationary state of `variant` on the homogeneous sphere (kappa, R, B)
/// for every kappa, scored against the oracle. A failure at one kappa is
/// recorded and the sweep goes on.
auto convergence_sweep(std::span<const double> kappa_list, double R, double B, const RadialGrid &grid,
                       Variant variant, const SweepOptions &opt = {}) -> SweepResult;

/// y ~ exp(intercept) x^exponent.
struct FitResult {
  double exponent = 0.0;
  double intercept = 0.0;
  std::size_t points_used = 0;
};

/// Least-squares line through (log x, log y). Needs at least two points with
/// distinct x; throws DomainError for a nonpositive value.
auto fit_power_law(std::span<const double> xs, std::span<const double> ys) -> FitResult;

struct Err0Point {
  double kappaR = 0.0;
  double err0 = 0.0;
};

auto err0_curve(std::span<const double> kappaR_list) -> std::vector<Err0Point>;

}  // namespace idsa
