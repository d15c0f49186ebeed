#pragma once

#include <cstddef>

#include "idsa/grid.hpp"

namespace idsa {

/// Trapped and streaming zeroth moments at one time level.
struct TwoComponentState {
  RadialField Jt;
  RadialField Js;
  double t = 0.0;
};

/// All-zero state at t = 0.
auto zero_state(const RadialGrid &grid) -> TwoComponentState;

/// Time stepping controls shared by every solver.
struct SolverConfig {
  double dt = 0.1;
  double t_end = 1e4;
  double stationarity_tol = 1e-10;
  /// Hold the diffusion source at its value from the previous step. When
  /// false it is iterated to a fixed point within each step.
  bool sigma_lagging = true;
  double kappa_floor = 1e-30;

  /// Throws InvalidArgument on dt <= 0, t_end < 0, stationarity_tol <= 0
  /// or kappa_floor <= 0.
  void validate() const;
};

/// max_i(|dJt_i| + |dJs_i|) / max_i(Jt_i + Js_i) between two states; 0 when
/// both are identically zero.
auto relative_change(const TwoComponentState &before, const TwoComponentState &after) -> double;

/// Throws NegativityError if any value of `field` is below -1e-12 * scale.
void check_nonnegative(const RadialField &field, double scale, double t, const char *name);

}  // namespace idsa
