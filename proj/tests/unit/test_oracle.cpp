#include <cmath>
#include <vector>

#include "doctest.h"
#include "idsa/error.hpp"
#include "idsa/oracle.hpp"

using namespace idsa;

namespace {

auto sphere(double kappa) -> ProblemSpec {
  ProblemSpec s;
  s.kappa = kappa;
  return s;
}

// kappa, r, J, H, K at R = 6, B = 1, from 40-digit direct integration of
// f over mu (tests/oracles/homogeneous_sphere_reference.py).
struct Ref {
  double kappa, r, J, H, K;
};
const std::vector<Ref> kReference = {
    {1, 0.5, 0.99738102875453312, 0.00042707515185662597, 0.33243687693383405},
    {1, 3.0, 0.98788276387651843, 0.0072968595549512355, 0.32755674624374222},
    {1, 5.9, 0.5973255787105087, 0.20811476510399343, 0.18860976482897428},
    {1, 6.0, 0.45833358934218139, 0.2465280551206965, 0.16608826519563081},
    {1, 6.3, 0.33848020124883201, 0.22360821326140274, 0.1608215954379799},
    {1, 9.0, 0.12528374763185573, 0.10956802449808734, 0.096483421589434202},
    {1, 17.9, 0.028512736025892579, 0.027698916963718597, 0.026916094351078336},
    {10, 3.0, 0.99999999999999702, 2.7955609635550275e-15, 0.3333333333333307},
    {10, 5.95, 0.83344339408614774, 0.11170312573091789, 0.25036826527331468},
    {10, 6.05, 0.43558746880411351, 0.24585069325865721, 0.16631025150182599},
    {10, 12.0, 0.066977275361438123, 0.062491319444444444, 0.058405973089987876},
    {100, 5.99, 0.92553673119135743, 0.054937328065065793, 0.29025644765405081},
    {100, 5.9985, 0.67908184413438457, 0.191185497477228, 0.19942880601651414},
    {100, 6.0075, 0.47501648160076893, 0.2493758235691306, 0.16664587448623375},
    {100, 7.0, 0.24246012791596851, 0.18367321428571429, 0.14389094412102157},
    {100, 17.0, 0.032177197284619586, 0.031141825259515571, 0.030150873727632137},
};

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("geometry factor") {
    CHECK(geometry_factor(0.0, 0.3, 6.0) == 1.0);
    CHECK(geometry_factor(6.0, -0.4, 6.0) == doctest::Approx(0.4));
    CHECK(geometry_factor(12.0, std::sqrt(3.0) / 2.0, 6.0) == doctest::Approx(0.0).epsilon(1e-7));
    CHECK_THROWS_AS(geometry_factor(12.0, 0.0, 6.0), DomainError);
  }

  TEST_CASE("path length") {
    CHECK(path_length(0.0, 0.7, 6.0) == doctest::Approx(6.0));
    CHECK(path_length(6.0, 1.0, 6.0) == doctest::Approx(12.0));
    CHECK(path_length(12.0, 1.0, 6.0) == doctest::Approx(12.0));
    CHECK_THROWS_AS(path_length(12.0, 0.5, 6.0), DomainError);
  }

  TEST_CASE("exact distribution") {
    const auto s = sphere(1.0);
    CHECK(exact_distribution(0.0, 0.5, s) == doctest::Approx(0.9975212478233336).epsilon(1e-14));
    CHECK(exact_distribution(12.0, 0.0, s) == 0.0);
    // opaque limit inside the sphere
    CHECK(exact_distribution(3.0, -0.2, sphere(1e4)) == doctest::Approx(1.0));
  }

  TEST_CASE("moments match the high-precision reference") {
    for (const auto &ref : kReference) {
      CAPTURE(ref.kappa);
      CAPTURE(ref.r);
      const auto m = exact_moments_at(ref.r, sphere(ref.kappa));
      CHECK(m.J == doctest::Approx(ref.J).epsilon(1e-9));
      CHECK(std::abs(m.H - ref.H) <= 1e-9 * std::max(ref.H, 1e-6));
      CHECK(m.K == doctest::Approx(ref.K).epsilon(1e-9));
    }
  }

  TEST_CASE("special values") {
    const auto sv = special_values(sphere(1.0));
    CHECK(sv.J0 == doctest::Approx(0.9975212478233336).epsilon(1e-14));
    CHECK(sv.JR == doctest::Approx(0.4583335893421814).epsilon(1e-13));
    CHECK(sv.HR == doctest::Approx(0.2465280551206965).epsilon(1e-13));
    CHECK(sv.H0 == 0.0);
    const auto big = special_values(sphere(1e6));
    CHECK(big.J0 == 1.0);
    CHECK(big.JR == doctest::Approx(0.5).epsilon(1e-7));
    // the centre and the surface of the moments agree with the special values
    const auto m0 = exact_moments_at(0.0, sphere(1.0));
    CHECK(m0.J == doctest::Approx(sv.J0).epsilon(1e-10));
    CHECK(std::abs(m0.H) < 1e-12);
  }

  TEST_CASE("moment ordering on the grid") {
    const auto g = make_uniform_grid(18.0, 300);
    for (double kappa : {0.1, 1.0, 10.0, 100.0}) {
      CAPTURE(kappa);
      const auto m = exact_moments(g, sphere(kappa));
      const auto ff = flux_factors(m);
      for (std::size_t i = 0; i < g.n_cells(); ++i) {
        CAPTURE(g.center(i));
        CHECK(m.J[i] >= 0.0);
        CHECK(m.J[i] <= 1.0 + 1e-12);
        CHECK(m.H[i] >= -1e-12);
        CHECK(m.H[i] <= m.J[i] + 1e-12);
        // Cauchy-Schwarz over the angular integral; k >= 1/3 only holds outside,
        // where the radiation is forward peaked
        CHECK(m.H[i] * m.H[i] <= m.J[i] * m.K[i] * (1 + 1e-10) + 1e-300);
        CHECK(m.K[i] <= m.J[i] + 1e-12);
        CHECK(ff.h[i] >= -1e-10);
        CHECK(ff.h[i] <= 1.0 + 1e-10);
        if (g.center(i) >= 6.0) CHECK(ff.k[i] >= 1.0 / 3.0 - 1e-10);
        CHECK(ff.k[i] <= 1.0 + 1e-10);
      }
    }
  }

  TEST_CASE("beyond R the flux obeys the inverse-square law") {
    const auto g = make_uniform_grid(18.0, 90);
    const auto m = exact_moments(g, sphere(2.0));
    const double c = 6.0 * 6.0 * special_values(sphere(2.0)).HR;
    for (std::size_t i = g.first_center_at_or_beyond(6.0); i < g.n_cells(); ++i) {
      CHECK(g.center(i) * g.center(i) * m.H[i] == doctest::Approx(c).epsilon(1e-9));
    }
  }

  TEST_CASE("exact moments are linear in B") {
    const auto g = make_uniform_grid(12.0, 40);
    auto s = sphere(3.0);
    const auto a = exact_moments(g, s);
    s.B = 2.5;
    const auto b = exact_moments(g, s);
    for (std::size_t i = 0; i < g.n_cells(); ++i) {
      CHECK(b.J[i] == doctest::Approx(2.5 * a.J[i]).epsilon(1e-12));
      CHECK(b.K[i] == doctest::Approx(2.5 * a.K[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("infinite-opacity limits") {
    const auto g = make_uniform_grid(24.0, 4);  // centres 3, 9, 15, 21
    const auto lim = limit_moments_infinite_kappa(g, 6.0, 1.0);
    CHECK(lim.J[0] == 1.0);
    CHECK(lim.H[0] == 0.0);
    CHECK(lim.K[0] == doctest::Approx(1.0 / 3.0));
    const double x = 6.0 / 9.0;
    CHECK(lim.J[1] == doctest::Approx(0.5 * (1.0 - std::sqrt(1.0 - x * x))));
    CHECK(lim.H[1] == doctest::Approx(0.25 * x * x));
    CHECK(lim.K[1] == doctest::Approx((1.0 - std::pow(1.0 - x * x, 1.5)) / 6.0));

    const auto at2R = limit_moments_infinite_kappa(make_uniform_grid(16.0, 2), 6.0, 1.0);  // centre 12
    CHECK(at2R.H[1] == doctest::Approx(0.0625));
  }

  TEST_CASE("limit far away: k tends to 1") {
    const auto lim = limit_moments_infinite_kappa(make_uniform_grid(2000.0, 2), 6.0, 1.0);
    CHECK(lim.K[1] / lim.J[1] == doctest::Approx(1.0).epsilon(1e-4));
  }

  TEST_CASE("flux factors of the opaque sphere") {
    const auto ff = flux_factors_infinite(make_uniform_grid(16.0, 2), 6.0);  // centres 4, 12
    CHECK(ff.h[0] == 0.0);
    CHECK(ff.k[0] == doctest::Approx(1.0 / 3.0));
    CHECK(ff.h[1] == doctest::Approx(0.9330127).epsilon(1e-7));
    CHECK(ff.k[1] == doctest::Approx(0.8720085).epsilon(1e-7));
    CHECK(free_streaming_flux_ratio(6.0, 6.0) == 0.5);
    CHECK(free_streaming_flux_ratio(2.0, 6.0) == 0.5);
    CHECK(free_streaming_eddington_factor(6.0, 6.0) == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("opaque limit is approached away from the surface") {
    const auto g = make_uniform_grid(18.0, 200);
    const auto m = exact_moments(g, sphere(200.0));
    const auto lim = limit_moments_infinite_kappa(g, 6.0, 1.0);
    for (std::size_t i = 0; i < g.n_cells(); ++i) {
      if (std::abs(g.center(i) - 6.0) < 0.2) continue;
      CHECK(std::abs(m.J[i] - lim.J[i]) < 2e-3);
    }
  }

  TEST_CASE("flux factors need J > 0") {
    auto s = sphere(1.0);
    s.B = 0.0;
    const auto m = exact_moments(make_uniform_grid(12.0, 10), s);
    CHECK(m.J[3] == 0.0);
    CHECK_THROWS_AS(flux_factors(m), DivisionByZero);
  }

  TEST_CASE("neutrinosphere") {
    CHECK(neutrinosphere_radius(sphere(1.0)) == doctest::Approx(6.0 - 2.0 / 3.0));
    CHECK(neutrinosphere_radius(sphere(100.0)) == doctest::Approx(6.0 - 2.0 / 300.0));
    CHECK_THROWS_AS(neutrinosphere_radius(sphere(0.1)), NoNeutrinosphere);
  }

  TEST_CASE("argument checks") {
    CHECK_THROWS_AS(exact_moments_at(1.0, sphere(1.0), 0.0), InvalidArgument);
    CHECK_THROWS_AS(exact_moments_at(-1.0, sphere(1.0)), InvalidArgument);
    auto s = sphere(1.0);
    s.kappa_s = 0.5;
    CHECK_THROWS_AS(exact_moments_at(1.0, s), InvalidArgument);
  }
}
