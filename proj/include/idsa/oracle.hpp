#pragma once

#include "idsa/grid.hpp"

namespace idsa {

/// Zeroth, first and second angular moments on the centres of one grid.
struct MomentTriple {
  RadialField J;
  RadialField H;
  RadialField K;
};

/// Flux ratio h = H/J and variable Eddington factor k = K/J.
struct FluxFactors {
  RadialField h;
  RadialField k;
};

struct PointMoments {
  double J = 0.0;
  double H = 0.0;
  double K = 0.0;
};

/// J(0), J(R), H(0), H(R) of the stationary homogeneous sphere.
struct SpecialValues {
  double J0 = 0.0;
  double JR = 0.0;
  double H0 = 0.0;
  double HR = 0.0;
};

// -- ray geometry ---------------------------------------------------------------

/// G = sqrt(1 - (r/R)^2 (1 - mu^2)). Throws DomainError for a negative
/// radicand (beyond round-off), i.e. a ray that misses the sphere.
auto geometry_factor(double r, double mu, double R) -> double;

/// Distance travelled through the sphere by the ray reaching radius r with
/// direction cosine mu: r*mu + R*G inside, 2*R*G outside. For r >= R the
/// ray must lie in the cone mu >= sqrt(1 - (R/r)^2), else DomainError.
auto path_length(double r, double mu, double R) -> double;

/// f(r, mu) = B (1 - exp(-kappa s)) inside the cone, 0 outside it.
auto exact_distribution(double r, double mu, const ProblemSpec &spec) -> double;

// -- moments ----------------------------------------------------------------------

/// Moments at a single radius by adaptive Gauss-Kronrod quadrature with
/// absolute and relative tolerance `tol`. Requires a homogeneous-sphere
/// spec. Throws QuadratureFailure (cell index 0) when the depth limit is hit.
auto exact_moments_at(double r, const ProblemSpec &spec, double tol = 1e-10) -> PointMoments;

/// exact_moments_at on every centre of `grid`, evaluated in parallel.
/// QuadratureFailure reports the worst unconverged cell.
auto exact_moments(const RadialGrid &grid, const ProblemSpec &spec, double tol = 1e-10) -> MomentTriple;

auto special_values(const ProblemSpec &spec) -> SpecialValues;

/// Moments of the infinitely opaque sphere (the kappa -> infinity limit).
auto limit_moments_infinite_kappa(const RadialGrid &grid, double R, double B) -> MomentTriple;

/// h_R, k_R of the infinitely opaque sphere.
auto flux_factors_infinite(const RadialGrid &grid, double R) -> FluxFactors;

/// h = H/J, k = K/J. Throws DivisionByZero where J vanishes.
auto flux_factors(const MomentTriple &moments) -> FluxFactors;

/// The geometric factor g(r): 1/2 inside R, (1 + sqrt(1 - (R/r)^2))/2 outside.
auto free_streaming_flux_ratio(double r, double R) -> double;

/// Variable Eddington factor of the infinitely opaque sphere at radius r.
auto free_streaming_eddington_factor(double r, double R) -> double;

/// Radius where the optical depth reaches 2/3: R - 2/(3 kappa) for the step
/// profile. Throws NoNeutrinosphere when kappa R <= 2/3.
auto neutrinosphere_radius(const ProblemSpec &spec) -> double;

}  // namespace idsa
