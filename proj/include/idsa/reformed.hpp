#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "idsa/grid.hpp"
#include "idsa/state.hpp"

namespace idsa {

enum class Variant { Old, New };

auto to_string(Variant v) -> const char *;

namespace discrete {
struct Tridiagonal;
}

/// A reformed two-component scheme on the homogeneous sphere, split
/// exactly at r = R. The trapped component lives on the centres below R;
/// beyond R it is zero and the streaming component keeps r^2 g(r) Js fixed.
class ReformedScheme {
 public:
  /// Requires a homogeneous-sphere spec and at least two centres below R.
  ReformedScheme(Variant variant, ProblemSpec spec, RadialGrid grid, SolverConfig cfg);

  [[nodiscard]] auto variant() const -> Variant { return variant_; }
  [[nodiscard]] auto spec() const -> const ProblemSpec & { return spec_; }
  [[nodiscard]] auto grid() const -> const RadialGrid & { return grid_; }
  [[nodiscard]] auto cfg() const -> const SolverConfig & { return cfg_; }
  /// Number of centres below R.
  [[nodiscard]] auto interior_cells() const -> std::size_t { return interior_; }

  /// Backward-Euler matrix (1 + dt kappa) I - dt L for the trapped interior,
  /// L being diffusion (plus inward advection for the Old variant).
  [[nodiscard]] auto implicit_matrix() const -> const discrete::Tridiagonal & { return *matrix_; }

  /// Interior stationary operator L - kappa I (no time derivative).
  [[nodiscard]] auto stationary_operator() const -> const discrete::Tridiagonal & { return *stationary_; }

 private:
  Variant variant_;
  ProblemSpec spec_;
  RadialGrid grid_;
  SolverConfig cfg_;
  std::size_t interior_ = 0;
  std::shared_ptr<const discrete::Tridiagonal> matrix_;
  std::shared_ptr<const discrete::Tridiagonal> stationary_;
};

/// Flux factors of the trapped and streaming components.
struct ClosureSet {
  RadialField h_t;  ///< 0
  RadialField h_s;  ///< g(r)
  RadialField k_t;  ///< 1/3
  RadialField k_s;  ///< 1/3 inside R, Eddington factor of the opaque sphere outside
};

auto make_closure_set(const RadialGrid &grid, double R) -> ClosureSet;

/// One backward-Euler step of the Old IDSA. Js inside R is
/// -(2/(3 kappa)) dJt/dr; a negative Js raises NegativityError.
auto step_old_idsa(const TwoComponentState &state, const ReformedScheme &scheme) -> TwoComponentState;

/// One backward-Euler step of the New IDSA. Js inside R is proportional to
/// dJt/dr, scaled so Js(R) equals the exact J(R). A vanishing boundary
/// gradient raises NormalizationSingularity.
auto step_new_idsa(const TwoComponentState &state, const ReformedScheme &scheme) -> TwoComponentState;

auto step_reformed(const TwoComponentState &state, const ReformedScheme &scheme) -> TwoComponentState;

struct MarchResult {
  TwoComponentState state;
  std::size_t steps = 0;
  bool stationary = false;
  double last_change = 0.0;
};

/// Steps from `initial` until the relative change of a step drops below
/// cfg.stationarity_tol or t reaches cfg.t_end.
auto march_to_stationarity(const ReformedScheme &scheme, TwoComponentState initial) -> MarchResult;
auto march_to_stationarity(const ReformedScheme &scheme) -> MarchResult;

/// The exact stationary solution of the continuous New IDSA system at the
/// grid centres.
auto new_idsa_stationary_closed_form(const RadialGrid &grid, const ProblemSpec &spec) -> TwoComponentState;

/// Relative error of the stationary New IDSA at r = 0 as a function of
/// kappa R > 0.
auto err0(double kappaR) -> double;

struct Reconstruction {
  RadialField H;
  RadialField K;
  RadialField h;  ///< H / (Jt + Js); 0 where undefined
  RadialField k;  ///< K / (Jt + Js); 0 where undefined
  std::vector<bool> defined;  ///< false where Jt + Js = 0
};

/// H = h_t Jt + h_s Js and K = k_t Jt + k_s Js.
auto reconstruct_HK(const TwoComponentState &state, const ClosureSet &closures) -> Reconstruction;

}  // namespace idsa
