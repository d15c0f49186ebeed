#include "idsa/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idsa/error.hpp"

namespace idsa {

auto zero_state(const RadialGrid &grid) -> TwoComponentState {
  return {RadialField(grid), RadialField(grid), 0.0};
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t_end >= 0.0)) throw InvalidArgument("t_end must be non-negative");
  if (!(stationarity_tol > 0.0)) throw InvalidArgument("stationarity_tol must be positive");
  if (!(kappa_floor > 0.0)) throw InvalidArgument("kappa_floor must be positive");
}

auto relative_change(const TwoComponentState &before, const TwoComponentState &after) -> double {
  double diff = 0.0;
  double scale = 0.0;
  const std::size_t n = after.Jt.size();
  for (std::size_t i = 0; i < n; ++i) {
    diff = std::max(diff, std::abs(after.Jt[i] - before.Jt[i]) + std::abs(after.Js[i] - before.Js[i]));
    scale = std::max(scale, after.Jt[i] + after.Js[i]);
  }
  if (scale == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
  return diff / scale;
}

void check_nonnegative(const RadialField &field, double scale, double t, const char *name) {
  const double limit = -1e-12 * std::max(scale, 0.0);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] < limit) {
      throw NegativityError(std::string(name) + " became negative (" + std::to_string(field[i]) + ") at cell " +
                                std::to_string(i) + ", t = " + std::to_string(t),
                            t, i, field[i]);
    }
  }
}

}  // namespace idsa
