#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "idsa/discretization.hpp"
#include "idsa/error.hpp"

using namespace idsa;
using namespace idsa::discrete;

TEST_SUITE("discretization") {
  TEST_CASE("Thomas solve inverts apply") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 40;
    Tridiagonal A(n);
    for (std::size_t i = 0; i < n; ++i) {
      A.lower[i] = u(rng);
      A.upper[i] = u(rng);
      A.diag[i] = 3.0 + u(rng);
    }
    std::vector<double> x(n);
    for (auto &v : x) v = u(rng);
    const auto b = A.apply(x);
    const auto y = solve(A, b);
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-12));
  }

  TEST_CASE("zero pivot is an internal error") {
    Tridiagonal A(2);
    A.diag = {0.0, 1.0};
    const std::vector<double> b{1.0, 1.0};
    CHECK_THROWS_AS(solve(A, b), InternalError);
  }

  TEST_CASE("constant fields have no diffusion") {
    const auto g = make_uniform_grid(18.0, 50);
    std::vector<double> kappa(50, 1.0);
    for (std::size_t i = 17; i < 50; ++i) kappa[i] = 1e-4;
    const auto st = make_diffusion_stencil(g, kappa, 1e-30, OuterBoundary::ZeroGradient);
    const auto d = st.apply(std::vector<double>(50, 0.731));
    for (double v : d) CHECK(v == 0.0);
  }

  TEST_CASE("matrix and flux forms agree") {
    const auto g = make_uniform_grid(10.0, 30);
    const std::vector<double> kappa(30, 2.0);
    const auto st = make_diffusion_stencil(g, kappa, 1e-30, OuterBoundary::ZeroGradient);
    std::vector<double> J(30);
    for (std::size_t i = 0; i < 30; ++i) J[i] = std::cos(0.3 * g.center(i));
    const auto a = st.apply(J);
    const auto b = st.weights.apply(J);
    for (std::size_t i = 0; i < 30; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
  }

  TEST_CASE("zero-gradient stencil conserves the volume integral") {
    const auto g = make_uniform_grid(7.0, 64);
    std::vector<double> kappa(64);
    std::vector<double> J(64);
    for (std::size_t i = 0; i < 64; ++i) {
      kappa[i] = 0.5 + g.center(i);
      J[i] = std::exp(-g.center(i));
    }
    const auto st = make_diffusion_stencil(g, kappa, 1e-30, OuterBoundary::ZeroGradient);
    const auto d = st.apply(J);
    double total = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
      total += d[i] / st.inv_measure[i];
      scale += std::abs(d[i] / st.inv_measure[i]);
    }
    CHECK(std::abs(total) <= 1e-13 * scale);
  }

  TEST_CASE("second-order accuracy on a smooth profile") {
    // D[r^2] with kappa = 1/3 is (1/r^2) d/dr(r^2 * 2r) = 6. The face fluxes are
    // exact for a quadratic, so the only error is dividing by r_i^2 dr instead
    // of the shell volume: D_i = 6 + dr^2 / (2 r_i^2).
    double err[2];
    for (int q = 0; q < 2; ++q) {
      const std::size_t n = q == 0 ? 100 : 200;
      const auto g = make_uniform_grid(1.0, n);
      const std::vector<double> kappa(interior_cell_count(g, 2.0 / 3.0), 1.0 / 3.0);
      const auto st = make_diffusion_stencil(g, kappa, 1e-30, OuterBoundary::Dirichlet, 2.0 / 3.0);
      std::vector<double> J(st.active);
      for (std::size_t i = 0; i < st.active; ++i) J[i] = g.center(i) * g.center(i) - 4.0 / 9.0;
      const auto d = st.apply(J);
      for (std::size_t i = 0; i + 1 < st.active; ++i) {
        const double r = g.center(i);
        CHECK(d[i] == doctest::Approx(6.0 + g.dr() * g.dr() / (2 * r * r)).epsilon(1e-9));
      }
      err[q] = 0.0;
      for (std::size_t i = g.first_center_at_or_beyond(0.2); i < st.active; ++i)
        err[q] = std::max(err[q], std::abs(d[i] - 6.0));
    }
    CHECK(err[0] < 0.05);
    CHECK(err[1] < err[0]);
  }

  TEST_CASE("Dirichlet boundary between centres") {
    const auto g = make_uniform_grid(18.0, 50);  // R = 6 sits 0.3 dr above centre 16
    CHECK(interior_cell_count(g, 6.0) == 17);
    const std::vector<double> kappa(17, 1.0);
    const auto st = make_diffusion_stencil(g, kappa, 1e-30, OuterBoundary::Dirichlet, 6.0);
    CHECK(st.active == 17);
    CHECK(st.boundary_gap == doctest::Approx(6.0 - g.center(16)));
    CHECK_THROWS_AS(make_diffusion_stencil(g, kappa, 1e-30, OuterBoundary::Dirichlet, 9.0), InvalidArgument);
  }

  TEST_CASE("gradients are exact for cubics vanishing at R") {
    const auto g = make_uniform_grid(18.0, 50);
    const double R = 6.0;
    const std::size_t m = interior_cell_count(g, R);
    auto f = [&](double r) { return (r - R) * (r * r + 1.0); };
    auto df = [&](double r) { return (r * r + 1.0) + 2.0 * r * (r - R); };
    std::vector<double> J(m);
    for (std::size_t i = 0; i < m; ++i) J[i] = f(g.center(i));
    CHECK(boundary_gradient(g, J, R) == doctest::Approx(df(R)).epsilon(1e-10));
    const auto grad = gradient_with_dirichlet(g, J, R);
    CHECK(grad[m - 1] == doctest::Approx(df(g.center(m - 1))).epsilon(1e-10));
  }

  TEST_CASE("gradient needs two cells") {
    const auto g = make_uniform_grid(18.0, 50);
    const std::vector<double> J{1.0};
    CHECK_THROWS_AS(boundary_gradient(g, J, 0.5), InvalidArgument);
  }
}
