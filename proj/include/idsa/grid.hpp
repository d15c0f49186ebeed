#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace idsa {

/// Cell-centred uniform radial mesh on [0, r_max].
///
/// No cell centre sits at r = 0, so the 1/r and 1/r^2 factors of the
/// spherical operators never need special-casing. Copies share the same
/// immutable storage.
class RadialGrid {
 public:
  [[nodiscard]] auto r_max() const -> double { return data_->r_max; }
  [[nodiscard]] auto n_cells() const -> std::size_t { return data_->centers.size(); }
  [[nodiscard]] auto dr() const -> double { return data_->dr; }
  [[nodiscard]] auto edges() const -> std::span<const double> { return data_->edges; }
  [[nodiscard]] auto centers() const -> std::span<const double> { return data_->centers; }
  [[nodiscard]] auto edge(std::size_t i) const -> double { return data_->edges[i]; }
  [[nodiscard]] auto center(std::size_t i) const -> double { return data_->centers[i]; }

  /// Shell volume of cell i divided by 4*pi: (r_{i+1/2}^3 - r_{i-1/2}^3)/3.
  [[nodiscard]] auto shell_volume(std::size_t i) const -> double;

  /// Index of the first cell whose centre is >= r (n_cells() if none).
  [[nodiscard]] auto first_center_at_or_beyond(double r) const -> std::size_t;

  /// Index of the centre closest to r.
  [[nodiscard]] auto nearest_center(double r) const -> std::size_t;

  friend auto operator==(const RadialGrid &a, const RadialGrid &b) -> bool;

 private:
  struct Data {
    double r_max;
    double dr;
    std::vector<double> edges;
    std::vector<double> centers;
  };
  explicit RadialGrid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;

  friend auto make_uniform_grid(double r_max, std::size_t n_cells) -> RadialGrid;
};

/// Throws InvalidArgument unless r_max > 0 and n_cells >= 2.
auto make_uniform_grid(double r_max, std::size_t n_cells) -> RadialGrid;

/// Scalar profile sampled at the cell centres of a grid. Values are finite.
class RadialField {
 public:
  /// Zero field.
  explicit RadialField(RadialGrid grid);
  RadialField(RadialGrid grid, std::vector<double> values);

  [[nodiscard]] auto grid() const -> const RadialGrid & { return grid_; }
  [[nodiscard]] auto values() const -> std::span<const double> { return values_; }
  [[nodiscard]] auto size() const -> std::size_t { return values_.size(); }
  [[nodiscard]] auto operator[](std::size_t i) const -> double { return values_[i]; }

  /// Replaces cell i; the value must be finite.
  void set(std::size_t i, double value);

 private:
  RadialGrid grid_;
  std::vector<double> values_;
};

/// The physical scenario: a sphere of radius R absorbing with opacity
/// `kappa` inside and `kappa_outside` beyond R, constant scattering
/// opacity `kappa_s`, and isotropic equilibrium intensity B.
struct ProblemSpec {
  double B = 1.0;
  double R = 6.0;
  double kappa = 1.0;
  double kappa_outside = 0.0;
  double kappa_s = 0.0;

  /// Throws InvalidArgument on kappa <= 0, R <= 0, B < 0 or negative
  /// outside/scattering opacities.
  void validate() const;

  /// kappa for r < R, kappa_outside for r >= R.
  [[nodiscard]] auto kappa_a(double r) const -> double { return r < R ? kappa : kappa_outside; }
  [[nodiscard]] auto kappa_total(double r) const -> double { return kappa_a(r) + kappa_s; }

  /// True for the exact step profile with no scattering, the only case the
  /// closed-form transport solution covers.
  [[nodiscard]] auto is_homogeneous_sphere() const -> bool {
    return kappa_outside == 0.0 && kappa_s == 0.0;
  }
};

/// Relative L2 error with the spherical shell weight r^2 dr:
/// sqrt(sum r_i^2 (a_i - e_i)^2) / sqrt(sum r_i^2 e_i^2).
auto l2_relative_error(const RadialField &approx, const RadialField &exact) -> double;

/// |a_i - e_i| / |e_i| per cell.
auto pointwise_relative_error(const RadialField &approx, const RadialField &exact) -> RadialField;

/// Shell-weighted L2 norm sqrt(sum r_i^2 v_i^2 dr).
auto shell_l2_norm(const RadialField &field) -> double;

}  // namespace idsa
