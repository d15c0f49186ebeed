#include "idsa/reformed.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idsa/discretization.hpp"
#include "idsa/error.hpp"
#include "idsa/oracle.hpp"

namespace idsa {

namespace {

// y cosh y - sinh y for y < 0.5, summed as sum_k 2k y^{2k+1} / (2k+1)!.
auto ycosh_minus_sinh_series(double y) -> double {
  const double y2 = y * y;
  double term = y;  // y^{2k+1}/(2k+1)! at k = 0
  double sum = 0.0;
  for (int k = 1; k < 30; ++k) {
    term *= y2 / ((2.0 * k) * (2.0 * k + 1.0));
    const double add = 2.0 * k * term;
    sum += add;
    if (add < 1e-18 * sum) break;
  }
  return sum;
}

// sinh(a) / sinh(b) for 0 < a <= b without overflow.
auto sinh_ratio(double a, double b) -> double {
  return std::exp(a - b) * std::expm1(-2.0 * a) / std::expm1(-2.0 * b);
}

// (y cosh y - sinh y) / (y^2 sinh(yR)) for 0 < y <= yR.
auto gradient_kernel(double y, double yR) -> double {
  if (y < 0.5) {
    // sinh(yR) may be huge; divide in log space when it is
    const double p = ycosh_minus_sinh_series(y) / (y * y);
    return yR < 700.0 ? p / std::sinh(yR) : p * 2.0 * std::exp(-yR);
  }
  const double e2 = std::exp(-2.0 * y);
  const double num = y * (1.0 + e2) - (1.0 - e2);  // (y cosh y - sinh y) 2 e^{-y}
  return std::exp(y - yR) * num / (y * y * (-std::expm1(-2.0 * yR)));
}

// 1 - y / tanh(y) for y > 0.
auto one_minus_ycoth(double y) -> double {
  if (y < 0.5) return -ycosh_minus_sinh_series(y) / std::sinh(y);
  const double e2 = std::exp(-2.0 * y);
  return 1.0 - y * (1.0 + e2) / (1.0 - e2);
}

void require_sphere(const ProblemSpec &spec) {
  spec.validate();
  if (!spec.is_homogeneous_sphere()) {
    throw InvalidArgument("reformed schemes need kappa_outside = 0 and kappa_s = 0");
  }
}

// Js beyond R from the divergence-free extension r^2 g(r) Js = R^2 Js(R) / 2.
void fill_streaming_extension(std::vector<double> &js, const RadialGrid &grid, std::size_t first, double R,
                              double JsR) {
  const double flux = 0.5 * R * R * JsR;
  for (std::size_t i = first; i < grid.n_cells(); ++i) {
    const double r = grid.center(i);
    js[i] = flux / (r * r * free_streaming_flux_ratio(r, R));
  }
}

auto implicit_solve(const TwoComponentState &state, const ReformedScheme &scheme) -> std::vector<double> {
  const auto &spec = scheme.spec();
  const double dt = scheme.cfg().dt;
  const std::size_t m = scheme.interior_cells();
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = state.Jt[i] + dt * spec.kappa * spec.B;
  return discrete::solve(scheme.implicit_matrix(), rhs);
}

}  // namespace

auto to_string(Variant v) -> const char * { return v == Variant::Old ? "old" : "new"; }

ReformedScheme::ReformedScheme(Variant variant, ProblemSpec spec, RadialGrid grid, SolverConfig cfg)
    : variant_(variant), spec_(spec), grid_(std::move(grid)), cfg_(cfg) {
  require_sphere(spec_);
  cfg_.validate();
  interior_ = discrete::interior_cell_count(grid_, spec_.R);
  if (interior_ < 2) throw InvalidArgument("reformed scheme: need at least two cell centres below R");
  if (interior_ == grid_.n_cells()) throw InvalidArgument("reformed scheme: grid must extend beyond R");

  const std::vector<double> kappa(interior_, spec_.kappa);
  const auto stencil = discrete::make_diffusion_stencil(grid_, kappa, cfg_.kappa_floor,
                                                        discrete::OuterBoundary::Dirichlet, spec_.R);
  discrete::Tridiagonal L = stencil.weights;
  if (variant_ == Variant::Old) {
    // + (2/3) dJt/dr, upwinded from the outside since the advection is inward
    const double a = 2.0 / 3.0 / grid_.dr();
    for (std::size_t i = 0; i + 1 < interior_; ++i) {
      L.diag[i] -= a;
      L.upper[i] += a;
    }
    L.diag[interior_ - 1] -= 2.0 / 3.0 / stencil.boundary_gap;
  }

  auto stationary = L;
  for (auto &d : stationary.diag) d -= spec_.kappa;
  stationary_ = std::make_shared<const discrete::Tridiagonal>(std::move(stationary));

  auto implicit = L;
  for (std::size_t i = 0; i < interior_; ++i) {
    implicit.lower[i] *= -cfg_.dt;
    implicit.upper[i] *= -cfg_.dt;
    implicit.diag[i] = 1.0 + cfg_.dt * spec_.kappa - cfg_.dt * implicit.diag[i];
  }
  matrix_ = std::make_shared<const discrete::Tridiagonal>(std::move(implicit));
}

auto make_closure_set(const RadialGrid &grid, double R) -> ClosureSet {
  if (!(R > 0.0)) throw InvalidArgument("make_closure_set: R must be positive");
  const std::size_t n = grid.n_cells();
  std::vector<double> hs(n), ks(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.center(i);
    hs[i] = free_streaming_flux_ratio(r, R);
    ks[i] = free_streaming_eddington_factor(r, R);
  }
  return {RadialField(grid), RadialField(grid, std::move(hs)), RadialField(grid, std::vector<double>(n, 1.0 / 3.0)),
          RadialField(grid, std::move(ks))};
}

auto step_old_idsa(const TwoComponentState &state, const ReformedScheme &scheme) -> TwoComponentState {
  const auto &grid = scheme.grid();
  const auto &spec = scheme.spec();
  const std::size_t m = scheme.interior_cells();
  const double t = state.t + scheme.cfg().dt;

  auto jt_in = implicit_solve(state, scheme);
  const auto grad = discrete::gradient_with_dirichlet(grid, jt_in, spec.R);
  const double scale = 2.0 / (3.0 * spec.kappa);

  std::vector<double> jt(grid.n_cells(), 0.0);
  std::vector<double> js(grid.n_cells(), 0.0);
  std::copy(jt_in.begin(), jt_in.end(), jt.begin());
  for (std::size_t i = 0; i < m; ++i) js[i] = -scale * grad[i];
  fill_streaming_extension(js, grid, m, spec.R, -scale * discrete::boundary_gradient(grid, jt_in, spec.R));

  TwoComponentState next{RadialField(grid, std::move(jt)), RadialField(grid, std::move(js)), t};
  check_nonnegative(next.Jt, spec.B, t, "Jt");
  // Js is a difference quotient of Jt, so round-off in Jt is amplified by
  // the stencil factor (2/(3 kappa))/dr
  check_nonnegative(next.Js, spec.B * std::max(1.0, scale / grid.dr()), t, "Js");
  return next;
}

auto step_new_idsa(const TwoComponentState &state, const ReformedScheme &scheme) -> TwoComponentState {
  const auto &grid = scheme.grid();
  const auto &spec = scheme.spec();
  const std::size_t m = scheme.interior_cells();
  const double t = state.t + scheme.cfg().dt;

  auto jt_in = implicit_solve(state, scheme);
  const auto grad = discrete::gradient_with_dirichlet(grid, jt_in, spec.R);
  const double gR = discrete::boundary_gradient(grid, jt_in, spec.R);
  if (gR == 0.0 || !std::isfinite(gR)) {
    throw NormalizationSingularity("New IDSA: trapped gradient at R vanishes, streaming normalization undefined");
  }
  const double JR = special_values(spec).JR;

  std::vector<double> jt(grid.n_cells(), 0.0);
  std::vector<double> js(grid.n_cells(), 0.0);
  std::copy(jt_in.begin(), jt_in.end(), jt.begin());
  for (std::size_t i = 0; i < m; ++i) js[i] = JR * grad[i] / gR;
  fill_streaming_extension(js, grid, m, spec.R, JR);

  TwoComponentState next{RadialField(grid, std::move(jt)), RadialField(grid, std::move(js)), t};
  check_nonnegative(next.Jt, spec.B, t, "Jt");
  check_nonnegative(next.Js, spec.B * std::max(1.0, JR / (std::abs(gR) * grid.dr())), t, "Js");
  return next;
}

auto step_reformed(const TwoComponentState &state, const ReformedScheme &scheme) -> TwoComponentState {
  return scheme.variant() == Variant::Old ? step_old_idsa(state, scheme) : step_new_idsa(state, scheme);
}

auto march_to_stationarity(const ReformedScheme &scheme, TwoComponentState initial) -> MarchResult {
  if (!(initial.Jt.grid() == scheme.grid()) || !(initial.Js.grid() == scheme.grid())) {
    throw InvalidArgument("march_to_stationarity: state lives on a different grid");
  }
  const auto &cfg = scheme.cfg();
  MarchResult out{std::move(initial), 0, false, INFINITY};
  const double t_stop = out.state.t + cfg.t_end;
  while (out.state.t < t_stop - 0.5 * cfg.dt) {
    auto next = step_reformed(out.state, scheme);
    out.last_change = relative_change(out.state, next);
    out.state = std::move(next);
    ++out.steps;
    if (out.last_change < cfg.stationarity_tol) {
      out.stationary = true;
      break;
    }
  }
  return out;
}

auto march_to_stationarity(const ReformedScheme &scheme) -> MarchResult {
  return march_to_stationarity(scheme, zero_state(scheme.grid()));
}

auto new_idsa_stationary_closed_form(const RadialGrid &grid, const ProblemSpec &spec) -> TwoComponentState {
  require_sphere(spec);
  const double B = spec.B;
  const double R = spec.R;
  const double s3k = std::sqrt(3.0) * spec.kappa;
  const double yR = s3k * R;
  const double JR = special_values(spec).JR;
  // dJt/dr(r) = -B s3k yR (y cosh y - sinh y) / (y^2 sinh yR), and at R
  // it equals (B/R)(1 - yR coth yR)
  const double gR = B / R * one_minus_ycoth(yR);

  const std::size_t n = grid.n_cells();
  const std::size_t m = grid.first_center_at_or_beyond(R);
  std::vector<double> jt(n, 0.0), js(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double y = s3k * grid.center(i);
    jt[i] = B * (1.0 - yR / y * sinh_ratio(y, yR));
    const double grad = -B * s3k * yR * gradient_kernel(y, yR);
    js[i] = gR == 0.0 ? 0.0 : JR * grad / gR;
  }
  fill_streaming_extension(js, grid, m, R, JR);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(jt[i]) || !std::isfinite(js[i])) {
      throw InternalError("new_idsa_stationary_closed_form: non-finite value at cell " + std::to_string(i));
    }
  }
  return {RadialField(grid, std::move(jt)), RadialField(grid, std::move(js)), INFINITY};
}

auto err0(double kappaR) -> double {
  if (!(kappaR > 0.0)) throw InvalidArgument("err0: kappa R must be positive");
  const double y = std::sqrt(3.0) * kappaR;
  const double y_over_sinh = y < 1.0 ? y / std::sinh(y) : 2.0 * y * std::exp(-y) / (-std::expm1(-2.0 * y));
  return (y_over_sinh - std::exp(-kappaR)) / (-std::expm1(-kappaR));
}

auto reconstruct_HK(const TwoComponentState &state, const ClosureSet &closures) -> Reconstruction {
  const auto &grid = state.Jt.grid();
  if (!(closures.h_s.grid() == grid) || !(state.Js.grid() == grid)) {
    throw InvalidArgument("reconstruct_HK: closures and state on different grids");
  }
  const std::size_t n = grid.n_cells();
  std::vector<double> H(n), K(n), h(n, 0.0), k(n, 0.0);
  std::vector<bool> defined(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double jt = state.Jt[i];
    const double js = state.Js[i];
    H[i] = closures.h_t[i] * jt + closures.h_s[i] * js;
    K[i] = closures.k_t[i] * jt + closures.k_s[i] * js;
    const double J = jt + js;
    if (J > 0.0) {
      defined[i] = true;
      h[i] = H[i] / J;
      k[i] = K[i] / J;
    }
  }
  return {RadialField(grid, std::move(H)), RadialField(grid, std::move(K)), RadialField(grid, std::move(h)),
          RadialField(grid, std::move(k)), std::move(defined)};
}

}  // namespace idsa
