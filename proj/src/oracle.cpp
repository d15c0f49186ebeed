#include "idsa/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "idsa/error.hpp"
#include "idsa/parallel.hpp"
#include "idsa/quadrature.hpp"

namespace idsa {

namespace {

constexpr double kRadicandSlack = 64.0 * std::numeric_limits<double>::epsilon();

// 1 - sqrt(1 - x) without cancellation for small x.
auto one_minus_sqrt_one_minus(double x) -> double { return x / (1.0 + std::sqrt(1.0 - x)); }

// e^{-x}(1 + x) - 1, which loses all digits to cancellation for small x.
auto exp_neg_times_one_plus_minus_one(double x) -> double {
  if (x >= 0.5) return std::exp(-x) * (1.0 + x) - 1.0;
  // sum_{n>=2} (-1)^n (1 - n) x^n / n!
  double term = 1.0;  // x^n / n!
  double sum = 0.0;
  for (int n = 1; n <= 30; ++n) {
    term *= x / n;
    if (n >= 2) sum += ((n % 2 == 0) ? 1.0 : -1.0) * (1.0 - n) * term;
  }
  return sum;
}

void require_homogeneous_sphere(const ProblemSpec &spec, const char *who) {
  spec.validate();
  if (!spec.is_homogeneous_sphere()) {
    throw InvalidArgument(std::string(who) +
                          ": the closed-form solution needs kappa_outside = 0 and kappa_s = 0");
  }
}

auto sorted_breakpoints(std::vector<double> pts) -> std::vector<double> {
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) {
    if (p >= 0.0 && p <= 1.0 && std::isfinite(p)) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Integrals {
  std::array<double, 3> value;
  bool converged;
  double error;
};

// int_0^1 {1, mu, mu^2} x {cosh, sinh, cosh}(kappa r mu) e^{-kappa R G} dmu for
// r < R, with the hyperbolic factors folded into exponentials whose
// arguments are non-positive: r mu - R G < 0 inside the sphere.
auto interior_integrals(double r, double kappa, double R, double tol) -> Integrals {
  const double rho = r / R;
  const double base = (1.0 - rho) * (1.0 + rho);
  auto integrand = [=](double mu) {
    const double G = std::sqrt(base + rho * rho * mu * mu);
    const double up = std::exp(kappa * (r * mu - R * G));
    const double down = std::exp(-kappa * (r * mu + R * G));
    const double c = 0.5 * (up + down);
    const double s = 0.5 * (up - down);
    return std::array<double, 3>{c, mu * s, mu * mu * c};
  };
  const double g0 = std::sqrt(base);
  const double layer = r > 0.0 ? 1.0 / (kappa * r) : 1.0;
  const auto pts = sorted_breakpoints({0.0, g0, 4.0 * g0, 1.0 - layer, 1.0 - 4.0 * layer, 1.0});
  const auto res = quadrature::integrate<3>(integrand, std::span<const double>(pts), {tol, tol, 40});
  return {res.value, res.converged, res.error};
}

// int_{mu_min}^1 {1, mu, mu^2} e^{-2 kappa R G} dmu for r >= R, integrated in
// the variable G (mu dmu = (R/r)^2 G dG). In mu the integrand has a
// square-root endpoint at mu_min that bisection cannot resolve.
auto exterior_integrals(double r, double kappa, double R, double tol) -> Integrals {
  const double q2 = (R / r) * (R / r);
  const double mu_min_sq = std::max(0.0, 1.0 - q2);
  auto integrand = [=](double G) {
    const double mu = std::sqrt(mu_min_sq + q2 * G * G);
    const double w = q2 * G * std::exp(-2.0 * kappa * R * G);
    return std::array<double, 3>{w / mu, w, w * mu};
  };
  const double layer = 1.0 / (2.0 * kappa * R);
  const double g_star = std::sqrt(mu_min_sq / q2);
  const auto pts = sorted_breakpoints({0.0, layer, 4.0 * layer, 16.0 * layer, g_star, 1.0});
  const auto res = quadrature::integrate<3>(integrand, std::span<const double>(pts), {tol, tol, 40});
  return {res.value, res.converged, res.error};
}

auto moments_at(double r, const ProblemSpec &spec, double tol, bool &converged, double &err) -> PointMoments {
  const double B = spec.B;
  const double R = spec.R;
  if (r < R) {
    const auto in = interior_integrals(r, spec.kappa, R, tol);
    converged = in.converged;
    err = in.error;
    return {B * (1.0 - in.value[0]), B * in.value[1], B * (1.0 / 3.0 - in.value[2])};
  }
  const auto out = exterior_integrals(r, spec.kappa, R, tol);
  converged = out.converged;
  err = out.error;
  const double q2 = (R / r) * (R / r);
  const double cone = one_minus_sqrt_one_minus(q2);  // 1 - mu_min
  const double mu_min = std::sqrt(1.0 - q2);
  return {0.5 * B * (cone - out.value[0]), 0.5 * B * (0.5 * q2 - out.value[1]),
          B / 6.0 * (cone * (1.0 + mu_min + mu_min * mu_min) - 3.0 * out.value[2])};
}

}  // namespace

auto geometry_factor(double r, double mu, double R) -> double {
  const double rho = r / R;
  const double radicand = 1.0 - rho * rho * (1.0 - mu * mu);
  if (radicand < -kRadicandSlack * std::max(1.0, rho * rho)) {
    throw DomainError("geometry_factor: ray misses the sphere (negative radicand)");
  }
  return std::sqrt(std::max(0.0, radicand));
}

auto path_length(double r, double mu, double R) -> double {
  if (!(R > 0.0) || r < 0.0 || mu < -1.0 || mu > 1.0) {
    throw DomainError("path_length: need R > 0, r >= 0, -1 <= mu <= 1");
  }
  if (r < R) return r * mu + R * geometry_factor(r, mu, R);
  const double mu_min = std::sqrt(1.0 - (R / r) * (R / r));
  if (mu < mu_min - kRadicandSlack) {
    throw DomainError("path_length: direction outside the cone of rays through the sphere");
  }
  return 2.0 * R * geometry_factor(r, mu, R);
}

auto exact_distribution(double r, double mu, const ProblemSpec &spec) -> double {
  if (r >= spec.R) {
    const double mu_min = std::sqrt(1.0 - (spec.R / r) * (spec.R / r));
    if (mu < mu_min) return 0.0;
  }
  return -spec.B * std::expm1(-spec.kappa * path_length(r, mu, spec.R));
}

auto exact_moments_at(double r, const ProblemSpec &spec, double tol) -> PointMoments {
  require_homogeneous_sphere(spec, "exact_moments_at");
  if (!(tol > 0.0)) throw InvalidArgument("exact_moments_at: tol must be > 0");
  if (!(r >= 0.0)) throw InvalidArgument("exact_moments_at: r must be >= 0");
  bool ok = true;
  double err = 0.0;
  const auto m = moments_at(r, spec, tol, ok, err);
  if (!ok) {
    throw QuadratureFailure("exact_moments_at: quadrature did not converge at r = " + std::to_string(r), 0, err);
  }
  return m;
}

auto exact_moments(const RadialGrid &grid, const ProblemSpec &spec, double tol) -> MomentTriple {
  require_homogeneous_sphere(spec, "exact_moments");
  if (!(tol > 0.0)) throw InvalidArgument("exact_moments: tol must be > 0");
  const std::size_t n = grid.n_cells();
  std::vector<double> J(n), H(n), K(n), err(n);
  std::vector<char> ok(n, 1);
  parallel_for(n, [&](std::size_t i) {
    bool conv = true;
    const auto m = moments_at(grid.center(i), spec, tol, conv, err[i]);
    J[i] = m.J;
    H[i] = m.H;
    K[i] = m.K;
    ok[i] = conv ? 1 : 0;
  });
  std::size_t worst = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok[i] && (worst == n || err[i] > err[worst])) worst = i;
  }
  if (worst != n) {
    throw QuadratureFailure("exact_moments: quadrature did not converge; worst cell " + std::to_string(worst) +
                                " at r = " + std::to_string(grid.center(worst)),
                            worst, err[worst]);
  }
  return {RadialField(grid, std::move(J)), RadialField(grid, std::move(H)), RadialField(grid, std::move(K))};
}

auto special_values(const ProblemSpec &spec) -> SpecialValues {
  spec.validate();
  const double B = spec.B;
  const double x = 2.0 * spec.kappa * spec.R;
  SpecialValues v;
  v.J0 = -B * std::expm1(-spec.kappa * spec.R);
  v.JR = 0.5 * B * (1.0 + std::expm1(-x) / x);
  v.H0 = 0.0;
  v.HR = 0.5 * B * (0.5 + exp_neg_times_one_plus_minus_one(x) / (x * x));
  return v;
}

auto limit_moments_infinite_kappa(const RadialGrid &grid, double R, double B) -> MomentTriple {
  if (!(R > 0.0)) throw InvalidArgument("limit_moments_infinite_kappa: R must be > 0");
  const std::size_t n = grid.n_cells();
  std::vector<double> J(n), H(n), K(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.center(i);
    if (r < R) {
      J[i] = B;
      H[i] = 0.0;
      K[i] = B / 3.0;
      continue;
    }
    const double q2 = (R / r) * (R / r);
    const double s = std::sqrt(1.0 - q2);
    const double cone = one_minus_sqrt_one_minus(q2);
    J[i] = 0.5 * B * cone;
    H[i] = 0.25 * B * q2;
    K[i] = B / 6.0 * cone * (1.0 + s + s * s);
  }
  return {RadialField(grid, std::move(J)), RadialField(grid, std::move(H)), RadialField(grid, std::move(K))};
}

auto free_streaming_flux_ratio(double r, double R) -> double {
  if (r < R) return 0.5;
  return 0.5 * (1.0 + std::sqrt(1.0 - (R / r) * (R / r)));
}

auto free_streaming_eddington_factor(double r, double R) -> double {
  if (r < R) return 1.0 / 3.0;
  const double q2 = (R / r) * (R / r);
  return (2.0 - q2 + std::sqrt(1.0 - q2)) / 3.0;
}

auto flux_factors_infinite(const RadialGrid &grid, double R) -> FluxFactors {
  if (!(R > 0.0)) throw InvalidArgument("flux_factors_infinite: R must be > 0");
  const std::size_t n = grid.n_cells();
  std::vector<double> h(n), k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.center(i);
    h[i] = r < R ? 0.0 : free_streaming_flux_ratio(r, R);
    k[i] = free_streaming_eddington_factor(r, R);
  }
  return {RadialField(grid, std::move(h)), RadialField(grid, std::move(k))};
}

auto flux_factors(const MomentTriple &m) -> FluxFactors {
  const std::size_t n = m.J.size();
  std::vector<double> h(n), k(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (m.J[i] == 0.0) throw DivisionByZero("flux_factors: J vanishes at cell " + std::to_string(i));
    h[i] = m.H[i] / m.J[i];
    k[i] = m.K[i] / m.J[i];
  }
  return {RadialField(m.J.grid(), std::move(h)), RadialField(m.J.grid(), std::move(k))};
}

auto neutrinosphere_radius(const ProblemSpec &spec) -> double {
  spec.validate();
  if (spec.kappa * spec.R <= 2.0 / 3.0) {
    throw NoNeutrinosphere("neutrinosphere_radius: kappa R <= 2/3, optical depth never reaches 2/3");
  }
  return spec.R - 2.0 / (3.0 * spec.kappa);
}

}  // namespace idsa
