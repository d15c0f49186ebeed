#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace idsa::quadrature {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 40;
};

template <std::size_t N>
struct Result {
  std::array<double, N> value{};
  double error = 0.0;  ///< summed |K15 - G7| estimate, max over components
  std::size_t panels = 0;
  bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half), Kronrod and
// Gauss weights. Gauss nodes are the odd entries of kXgk.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N, class F>
void gk15(F &f, double a, double b, std::array<double, N> &kronrod, std::array<double, N> &gauss) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const auto fc = f(mid);
  for (std::size_t k = 0; k < N; ++k) {
    kronrod[k] = kWgk[7] * fc[k];
    gauss[k] = kWg[3] * fc[k];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const auto f1 = f(mid - dx);
    const auto f2 = f(mid + dx);
    for (std::size_t k = 0; k < N; ++k) {
      const double sum = f1[k] + f2[k];
      kronrod[k] += kWgk[j] * sum;
      if (j % 2 == 1) gauss[k] += kWg[j / 2] * sum;
    }
  }
  for (std::size_t k = 0; k < N; ++k) {
    kronrod[k] *= half;
    gauss[k] *= half;
  }
}

}  // namespace detail

/// Adaptive bisection of [points.front(), points.back()] with a
/// Gauss-Kronrod 7/15 pair per panel.
///
/// A panel of width w is accepted when its error estimate is below
/// max(abs_tol * w / width, rel_tol * |I_panel|); the summed error is then
/// bounded by abs_tol + rel_tol * int |f|. Panels still unresolved at
/// max_depth are accepted as-is and flag the result as not converged.
/// `f` maps a double to std::array<double, N>; all N components share the
/// subdivision and the error is the worst component.
///
/// One initial panel is seeded per consecutive pair of increasing
/// breakpoints; use them to expose boundary layers narrower than the first
/// Kronrod node spacing.
template <std::size_t N, class F>
auto integrate(F &&f, std::span<const double> points, const Options &opt = {}) -> Result<N> {
  Result<N> out;
  if (points.size() < 2 || !(points.back() > points.front())) return out;
  const double width = points.back() - points.front();

  struct Panel {
    double lo, hi;
    int depth;
  };
  std::vector<Panel> stack;
  stack.reserve(2 * static_cast<std::size_t>(opt.max_depth) + points.size() + 2);
  for (std::size_t i = points.size() - 1; i > 0; --i) {
    if (points[i] > points[i - 1]) stack.push_back({points[i - 1], points[i], 0});
  }

  std::array<double, N> kr{};
  std::array<double, N> ga{};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    detail::gk15<N>(f, p.lo, p.hi, kr, ga);

    double err = 0.0;
    double mag = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      err = std::max(err, std::abs(kr[k] - ga[k]));
      mag = std::max(mag, std::abs(kr[k]));
    }
    const double allowed = std::max(opt.abs_tol * (p.hi - p.lo) / width, opt.rel_tol * mag);
    const bool at_limit = p.depth >= opt.max_depth;
    if (err <= allowed || at_limit) {
      for (std::size_t k = 0; k < N; ++k) out.value[k] += kr[k];
      out.error += err;
      ++out.panels;
      if (at_limit && err > allowed) out.converged = false;
      continue;
    }
    const double mid = 0.5 * (p.lo + p.hi);
    stack.push_back({mid, p.hi, p.depth + 1});
    stack.push_back({p.lo, mid, p.depth + 1});
  }
  return out;
}

/// Single-interval convenience form.
template <std::size_t N, class F>
auto integrate(F &&f, double a, double b, const Options &opt = {}) -> Result<N> {
  const std::array<double, 2> ends = {a, b};
  return integrate<N>(std::forward<F>(f), std::span<const double>(ends), opt);
}

}  // namespace idsa::quadrature
