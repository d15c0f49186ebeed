#include "idsa/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idsa/error.hpp"

namespace idsa {

auto RadialGrid::shell_volume(std::size_t i) const -> double {
  const double lo = data_->edges[i];
  const double hi = data_->edges[i + 1];
  return (hi * hi * hi - lo * lo * lo) / 3.0;
}

auto RadialGrid::first_center_at_or_beyond(double r) const -> std::size_t {
  const auto &c = data_->centers;
  return static_cast<std::size_t>(std::lower_bound(c.begin(), c.end(), r) - c.begin());
}

auto RadialGrid::nearest_center(double r) const -> std::size_t {
  const auto n = n_cells();
  const double pos = r / data_->dr - 0.5;
  if (pos <= 0.0) return 0;
  const auto i = static_cast<std::size_t>(std::llround(pos));
  return std::min(i, n - 1);
}

auto operator==(const RadialGrid &a, const RadialGrid &b) -> bool {
  return a.data_ == b.data_ || (a.r_max() == b.r_max() && a.n_cells() == b.n_cells());
}

auto make_uniform_grid(double r_max, std::size_t n_cells) -> RadialGrid {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw InvalidArgument("make_uniform_grid: r_max must be positive and finite");
  }
  if (n_cells < 2) throw InvalidArgument("make_uniform_grid: need at least 2 cells");

  auto data = std::make_shared<RadialGrid::Data>();
  data->r_max = r_max;
  data->dr = r_max / static_cast<double>(n_cells);
  data->edges.resize(n_cells + 1);
  data->centers.resize(n_cells);
  for (std::size_t i = 0; i <= n_cells; ++i) {
    data->edges[i] = r_max * (static_cast<double>(i) / static_cast<double>(n_cells));
  }
  data->edges.back() = r_max;
  for (std::size_t i = 0; i < n_cells; ++i) {
    data->centers[i] = 0.5 * (data->edges[i] + data->edges[i + 1]);
  }
  return RadialGrid(std::move(data));
}

RadialField::RadialField(RadialGrid grid) : grid_(std::move(grid)), values_(grid_.n_cells(), 0.0) {}

RadialField::RadialField(RadialGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.n_cells()) {
    throw InvalidArgument("RadialField: " + std::to_string(values_.size()) + " values for " +
                          std::to_string(grid_.n_cells()) + " cells");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidArgument("RadialField: non-finite value at cell " + std::to_string(i));
    }
  }
}

void RadialField::set(std::size_t i, double value) {
  if (!std::isfinite(value)) {
    throw InvalidArgument("RadialField: non-finite value at cell " + std::to_string(i));
  }
  values_.at(i) = value;
}

void ProblemSpec::validate() const {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("ProblemSpec: kappa must be > 0");
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("ProblemSpec: R must be > 0");
  if (!finite_nonneg(B)) throw InvalidArgument("ProblemSpec: B must be >= 0");
  if (!finite_nonneg(kappa_outside)) throw InvalidArgument("ProblemSpec: kappa_outside must be >= 0");
  if (!finite_nonneg(kappa_s)) throw InvalidArgument("ProblemSpec: kappa_s must be >= 0");
}

namespace {

void require_same_grid(const RadialField &a, const RadialField &b, const char *who) {
  if (!(a.grid() == b.grid())) throw InvalidArgument(std::string(who) + ": fields live on different grids");
}

}  // namespace

auto shell_l2_norm(const RadialField &field) -> double {
  const auto r = field.grid().centers();
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) sum += r[i] * r[i] * field[i] * field[i];
  return std::sqrt(sum * field.grid().dr());
}

auto l2_relative_error(const RadialField &approx, const RadialField &exact) -> double {
  require_same_grid(approx, exact, "l2_relative_error");
  const auto r = exact.grid().centers();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double w = r[i] * r[i];
    const double d = approx[i] - exact[i];
    num += w * d * d;
    den += w * exact[i] * exact[i];
  }
  if (den == 0.0) throw DegenerateNorm("l2_relative_error: exact field has zero norm");
  return std::sqrt(num / den);
}

auto pointwise_relative_error(const RadialField &approx, const RadialField &exact) -> RadialField {
  require_same_grid(approx, exact, "pointwise_relative_error");
  std::vector<double> out(exact.size());
  for (std::size_t i = 0; i < exact.size(); ++i) {
    if (exact[i] == 0.0) {
      throw DivisionByZero("pointwise_relative_error: exact value is zero at cell " + std::to_string(i));
    }
    out[i] = std::abs(approx[i] - exact[i]) / std::abs(exact[i]);
  }
  return RadialField(exact.grid(), std::move(out));
}

}  // namespace idsa
