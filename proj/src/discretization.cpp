#include "idsa/discretization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "idsa/error.hpp"

namespace idsa::discrete {

auto Tridiagonal::apply(std::span<const double> x) const -> std::vector<double> {
  const std::size_t n = size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

auto solve(const Tridiagonal &system, std::span<const double> rhs) -> std::vector<double> {
  const std::size_t n = system.size();
  if (rhs.size() != n) throw InvalidArgument("tridiagonal solve: size mismatch");
  std::vector<double> c(n, 0.0);
  std::vector<double> x(rhs.begin(), rhs.end());
  double pivot = system.diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = system.diag[i] - system.lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw InternalError("tridiagonal solve: zero pivot at row " + std::to_string(i));
    }
    c[i] = (i + 1 < n) ? system.upper[i] / pivot : 0.0;
    x[i] = (i > 0 ? x[i] - system.lower[i] * x[i - 1] : x[i]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

auto interior_cell_count(const RadialGrid &grid, double R) -> std::size_t {
  return grid.first_center_at_or_beyond(R - 1e-9 * grid.dr());
}

auto DiffusionStencil::apply(std::span<const double> J) const -> std::vector<double> {
  const std::size_t n = active;
  std::vector<double> d(n, 0.0);
  double flux_in = 0.0;  // through the face at r = 0
  for (std::size_t i = 0; i < n; ++i) {
    const double flux_out = i + 1 < n ? conductance[i] * (J[i + 1] - J[i]) : boundary_conductance * (0.0 - J[i]);
    d[i] = (flux_out - flux_in) * inv_measure[i];
    flux_in = flux_out;
  }
  return d;
}

auto make_diffusion_stencil(const RadialGrid &grid, std::span<const double> kappa_cells, double kappa_floor,
                            OuterBoundary outer, double boundary_radius) -> DiffusionStencil {
  const std::size_t n = kappa_cells.size();
  if (n < 2 || n > grid.n_cells()) throw InvalidArgument("diffusion stencil: need 2..n_cells active cells");
  const double dr = grid.dr();

  DiffusionStencil st;
  st.active = n;
  st.conductance.resize(n - 1);
  st.inv_measure.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double kf = std::max(kappa_floor, 0.5 * (kappa_cells[i] + kappa_cells[i + 1]));
    const double rf = grid.edge(i + 1);
    st.conductance[i] = rf * rf / (3.0 * kf * dr);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.center(i);
    st.inv_measure[i] = 1.0 / (r * r * dr);
  }

  if (outer == OuterBoundary::Dirichlet) {
    const std::size_t m = n - 1;
    const double rm = grid.center(m);
    const double gap = boundary_radius - rm;
    if (!(gap > 0.0) || gap > dr * (1.0 + 1e-12)) {
      throw InvalidArgument("diffusion stencil: Dirichlet radius must lie in (r_m, r_m + dr]");
    }
    st.boundary_gap = gap;
    const double face = 0.5 * (rm + boundary_radius);
    const double kf = std::max(kappa_floor, kappa_cells[m]);
    st.boundary_conductance = face * face / (3.0 * kf * gap);
    st.inv_measure[m] = 1.0 / (rm * rm * 0.5 * (boundary_radius - grid.center(m - 1)));
  }

  auto &w = st.weights;
  w = Tridiagonal(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? st.conductance[i - 1] : 0.0;
    const double right = i + 1 < n ? st.conductance[i] : st.boundary_conductance;
    w.lower[i] = left * st.inv_measure[i];
    w.upper[i] = i + 1 < n ? right * st.inv_measure[i] : 0.0;
    w.diag[i] = -(left + right) * st.inv_measure[i];
  }
  return st;
}

namespace {

// First-derivative weights at x for the nodes xs (Lagrange interpolation).
template <std::size_t N>
auto derivative_weights(double x, const std::array<double, N> &xs) -> std::array<double, N> {
  std::array<double, N> w{};
  for (std::size_t j = 0; j < N; ++j) {
    double denom = 1.0;
    for (std::size_t k = 0; k < N; ++k) {
      if (k != j) denom *= xs[j] - xs[k];
    }
    // d/dx prod_{k != j} (x - x_k)
    double sum = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
      if (l == j) continue;
      double prod = 1.0;
      for (std::size_t k = 0; k < N; ++k) {
        if (k != j && k != l) prod *= x - xs[k];
      }
      sum += prod;
    }
    w[j] = sum / denom;
  }
  return w;
}

// Derivative at x from the last three active centres and J(R) = 0; with
// only two active centres the quadratic through them is used.
auto boundary_stencil(const RadialGrid &grid, std::span<const double> J, double R, double x) -> double {
  const std::size_t m = J.size() - 1;
  if (m >= 2) {
    const std::array<double, 4> xs{grid.center(m - 2), grid.center(m - 1), grid.center(m), R};
    const auto w = derivative_weights(x, xs);
    return w[0] * J[m - 2] + w[1] * J[m - 1] + w[2] * J[m];
  }
  const std::array<double, 3> xs{grid.center(m - 1), grid.center(m), R};
  const auto w = derivative_weights(x, xs);
  return w[0] * J[m - 1] + w[1] * J[m];
}

}  // namespace

auto gradient_with_dirichlet(const RadialGrid &grid, std::span<const double> J, double R) -> std::vector<double> {
  const std::size_t n = J.size();
  if (n < 2) throw InvalidArgument("gradient: need at least two interior cells");
  const double dr = grid.dr();
  std::vector<double> g(n);
  g[0] = (J[1] - J[0]) / (2.0 * dr);
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (J[i + 1] - J[i - 1]) / (2.0 * dr);
  g[n - 1] = boundary_stencil(grid, J, R, grid.center(n - 1));
  return g;
}

auto boundary_gradient(const RadialGrid &grid, std::span<const double> J, double R) -> double {
  if (J.size() < 2) throw InvalidArgument("boundary_gradient: need at least two interior cells");
  return boundary_stencil(grid, J, R, R);
}

}  // namespace idsa::discrete
