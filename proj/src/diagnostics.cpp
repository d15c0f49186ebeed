#include "idsa/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "idsa/error.hpp"
#include "idsa/parallel.hpp"

namespace idsa {

auto score_moments(double kappa, const MomentTriple &approx, const MomentTriple &exact) -> ConvergenceRecord {
  return {kappa, l2_relative_error(approx.J, exact.J), l2_relative_error(approx.H, exact.H),
          l2_relative_error(approx.K, exact.K)};
}

auto score_state(double kappa, const TwoComponentState &state, double R, const MomentTriple &exact)
    -> ConvergenceRecord {
  const auto &grid = state.Jt.grid();
  const auto rc = reconstruct_HK(state, make_closure_set(grid, R));
  std::vector<double> j(grid.n_cells());
  for (std::size_t i = 0; i < j.size(); ++i) j[i] = state.Jt[i] + state.Js[i];
  return score_moments(kappa, {RadialField(grid, std::move(j)), rc.H, rc.K}, exact);
}

namespace {

auto stationary_state(const ProblemSpec &spec, const RadialGrid &grid, Variant variant, const SweepOptions &opt)
    -> TwoComponentState {
  if (variant == Variant::New && !opt.march_new) return new_idsa_stationary_closed_form(grid, spec);
  const ReformedScheme scheme(variant, spec, grid, opt.cfg);
  auto res = march_to_stationarity(scheme);
  if (!res.stationary) {
    throw NotStationary("not stationary by t = " + std::to_string(res.state.t) +
                        " (last relative change " + std::to_string(res.last_change) + ")");
  }
  return std::move(res.state);
}

}  // namespace

auto convergence_sweep(std::span<const double> kappa_list, double R, double B, const RadialGrid &grid,
                       Variant variant, const SweepOptions &opt) -> SweepResult {
  for (double k : kappa_list) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("convergence_sweep: kappa must be positive");
  }
  std::vector<std::optional<ConvergenceRecord>> recs(kappa_list.size());
  std::vector<SweepFailure> fails(kappa_list.size());
  parallel_for(
      kappa_list.size(),
      [&](std::size_t n) {
        ProblemSpec spec;
        spec.kappa = kappa_list[n];
        spec.R = R;
        spec.B = B;
        try {
          spec.validate();
          const auto state = stationary_state(spec, grid, variant, opt);
          const auto exact = exact_moments(grid, spec, opt.oracle_tol);
          recs[n] = score_state(spec.kappa, state, R, exact);
        } catch (const Error &e) {
          fails[n] = {spec.kappa, e.kind(), e.what()};
        }
      },
      1);

  SweepResult out;
  for (std::size_t n = 0; n < recs.size(); ++n) {
    if (recs[n]) {
      out.records.push_back(*recs[n]);
    } else {
      out.failures.push_back(fails[n]);
    }
  }
  std::sort(out.records.begin(), out.records.end(), [](auto &a, auto &b) { return a.kappa < b.kappa; });
  std::sort(out.failures.begin(), out.failures.end(), [](auto &a, auto &b) { return a.kappa < b.kappa; });
  return out;
}

auto fit_power_law(std::span<const double> xs, std::span<const double> ys) -> FitResult {
  if (xs.size() != ys.size()) throw InvalidArgument("fit_power_law: xs and ys differ in length");
  if (xs.size() < 2) throw InvalidArgument("fit_power_law: need at least two points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n);
  std::vector<double> ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw DomainError("fit_power_law: values must be positive and finite");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_power_law: all x values coincide");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx, n};
}

auto err0_curve(std::span<const double> kappaR_list) -> std::vector<Err0Point> {
  std::vector<Err0Point> out;
  out.reserve(kappaR_list.size());
  for (double x : kappaR_list) {
    if (!(x > 0.0)) throw InvalidArgument("err0_curve: kappa R must be positive");
    out.push_back({x, err0(x)});
  }
  return out;
}

}  // namespace idsa
