#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idsa/grid.hpp"

namespace idsa::discrete {

/// Row i couples unknowns i-1, i, i+1 with weights lower[i], diag[i],
/// upper[i]; lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  [[nodiscard]] auto size() const -> std::size_t { return diag.size(); }
  [[nodiscard]] auto apply(std::span<const double> x) const -> std::vector<double>;
};

/// Thomas algorithm. The systems assembled here are diagonally dominant,
/// so no pivoting; a vanishing pivot throws InternalError.
auto solve(const Tridiagonal &system, std::span<const double> rhs) -> std::vector<double>;

/// How the outermost active cell closes.
enum class OuterBoundary {
  ZeroGradient,  ///< no flux through r_max
  Dirichlet,     ///< J = 0 at `boundary_radius`, which may fall between centres
};

/// Conservative discrete form of (1/r^2) d/dr( r^2/(3 kappa) dJ/dr ):
///
///   D_i = (F_{i+1/2} - F_{i-1/2}) / (r_i^2 h_i),
///   F_{i+1/2} = r_{i+1/2}^2 / (3 kappa_{i+1/2}) (J_{i+1} - J_i) / dr,
///
/// with kappa on a face the mean of its two cells, floored at kappa_floor.
/// The face at r = 0 carries no flux (r^2 = 0). With a Dirichlet boundary
/// the last active cell m couples to the boundary value through a face at
/// (r_m + R)/2 and width h_m = (R - r_{m-1})/2 (Shortley-Weller), so the
/// boundary never has to be moved onto a mesh face.
struct DiffusionStencil {
  Tridiagonal weights;      ///< D = weights * J over the active cells
  std::size_t active = 0;   ///< number of active cells (a prefix of the grid)
  double boundary_gap = 0;  ///< R - r_m for Dirichlet, 0 otherwise

  std::vector<double> conductance;  ///< face i+1/2: flux per unit (J_{i+1} - J_i)
  double boundary_conductance = 0;  ///< Dirichlet face: flux per unit (0 - J_m)
  std::vector<double> inv_measure;  ///< 1 / (r_i^2 h_i)

  /// D[J] in flux-difference form, so a constant field gives exactly 0
  /// (away from a Dirichlet boundary) rather than round-off.
  [[nodiscard]] auto apply(std::span<const double> J) const -> std::vector<double>;
};

/// `kappa_cells` holds the total opacity of each active cell.
auto make_diffusion_stencil(const RadialGrid &grid, std::span<const double> kappa_cells, double kappa_floor,
                            OuterBoundary outer, double boundary_radius = 0.0) -> DiffusionStencil;

/// Cells whose centres lie below R. Centres within 1e-9 dr of R count as
/// beyond it, matching the classification r >= R of the oracle.
auto interior_cell_count(const RadialGrid &grid, double R) -> std::size_t;

/// dJ/dr at the first `active` centres: mirror symmetry at r = 0, centred
/// differences inside, and at the last cell the derivative of the cubic
/// through the last three centres and J(R) = 0.
auto gradient_with_dirichlet(const RadialGrid &grid, std::span<const double> J, double R) -> std::vector<double>;

/// One-sided dJ/dr at r = R from the cubic through the last three active
/// centres and J(R) = 0 (the quadratic when only two are active). Third
/// order, so the error does not depend on where R falls between centres.
auto boundary_gradient(const RadialGrid &grid, std::span<const double> J, double R) -> double;

}  // namespace idsa::discrete
