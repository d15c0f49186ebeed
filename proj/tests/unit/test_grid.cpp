#include <cmath>

#include "doctest.h"
#include "idsa/error.hpp"
#include "idsa/grid.hpp"

using namespace idsa;

TEST_SUITE("grid") {
  TEST_CASE("uniform grid geometry") {
    const auto g = make_uniform_grid(18.0, 50);
    CHECK(g.n_cells() == 50);
    CHECK(g.dr() == doctest::Approx(0.36));
    CHECK(g.edge(0) == 0.0);
    CHECK(g.edge(50) == doctest::Approx(18.0));
    CHECK(g.center(0) == doctest::Approx(0.18));
    CHECK(g.first_center_at_or_beyond(6.0) == 17);
    CHECK(g.first_center_at_or_beyond(100.0) == 50);
    CHECK(g.nearest_center(6.0) == 16);
  }

  TEST_CASE("shell volumes sum to the ball") {
    const auto g = make_uniform_grid(3.0, 37);
    double v = 0.0;
    for (std::size_t i = 0; i < g.n_cells(); ++i) v += g.shell_volume(i);
    CHECK(v == doctest::Approx(27.0 / 3.0).epsilon(1e-13));
  }

  TEST_CASE("invalid grids") {
    CHECK_THROWS_AS(make_uniform_grid(0.0, 10), InvalidArgument);
    CHECK_THROWS_AS(make_uniform_grid(1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(make_uniform_grid(-1.0, 10), InvalidArgument);
  }

  TEST_CASE("grids compare by value") {
    CHECK(make_uniform_grid(2.0, 10) == make_uniform_grid(2.0, 10));
    CHECK_FALSE(make_uniform_grid(2.0, 10) == make_uniform_grid(2.0, 11));
  }

  TEST_CASE("fields reject non-finite values") {
    const auto g = make_uniform_grid(1.0, 4);
    RadialField f(g);
    CHECK(f[2] == 0.0);
    f.set(2, 1.5);
    CHECK(f[2] == 1.5);
    CHECK_THROWS_AS(f.set(1, NAN), InvalidArgument);
    CHECK_THROWS_AS(RadialField(g, {1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(RadialField(g, {1.0, INFINITY, 0.0, 0.0}), InvalidArgument);
  }

  TEST_CASE("shell-weighted errors") {
    const auto g = make_uniform_grid(2.0, 2);  // centres 0.5, 1.5
    const RadialField e(g, {1.0, 1.0});
    const RadialField a(g, {2.0, 1.0});
    // sqrt(0.25 * 1) / sqrt(0.25 + 2.25)
    CHECK(l2_relative_error(a, e) == doctest::Approx(std::sqrt(0.25 / 2.5)));
    CHECK(l2_relative_error(e, e) == 0.0);
    const auto p = pointwise_relative_error(a, e);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == 0.0);
    CHECK(shell_l2_norm(e) == doctest::Approx(std::sqrt(2.5 * 1.0)));
  }

  TEST_CASE("errors need matching grids and a nonzero reference") {
    const RadialField a(make_uniform_grid(1.0, 3));
    const RadialField b(make_uniform_grid(1.0, 4));
    CHECK_THROWS_AS(l2_relative_error(a, b), InvalidArgument);
    CHECK_THROWS_AS(l2_relative_error(a, a), DegenerateNorm);
  }

  TEST_CASE("problem spec validation") {
    ProblemSpec s;
    CHECK_NOTHROW(s.validate());
    CHECK(s.kappa_a(5.9) == 1.0);
    CHECK(s.kappa_a(6.0) == 0.0);
    CHECK(s.is_homogeneous_sphere());
    s.kappa = 0.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = {};
    s.B = -1.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = {};
    s.kappa_outside = 1e-3;
    CHECK_FALSE(s.is_homogeneous_sphere());
  }
}
