#include <cmath>
#include <limits>
#include <string>

#include "doctest.h"
#include "idsa/config.hpp"
#include "idsa/error.hpp"

using namespace idsa;

TEST_SUITE("config") {
  TEST_CASE("defaults per experiment") {
    const auto c = parse_config("experiment = spurious\n");
    CHECK(c.experiment == Experiment::Spurious);
    CHECK(c.n_cells == 50);
    CHECK_FALSE(c.solver.sigma_lagging);
    CHECK(c.eps_list.size() == 13);
    CHECK(c.r_max == doctest::Approx(18.0));

    const auto i = parse_config("experiment = instability");
    CHECK(i.n_cells == 10000);
    CHECK(i.solver.sigma_lagging);
    CHECK(i.solver.t_end == 1000.0);
    CHECK(i.resolved.size() == config_keys().size());
  }

  TEST_CASE("values, comments and overrides") {
    const auto c = parse_config(
        "# sweep\n"
        "experiment = convergence  # trailing\n"
        "R = 4\n"
        "kappa_list = 1, 3 ,9\n"
        "variant = old\n",
        {{"n_cells", "123"}, {"R", "5"}});
    CHECK(c.spec.R == 5.0);
    CHECK(c.r_max == 15.0);
    CHECK(c.n_cells == 123);
    CHECK(c.variant == Variant::Old);
    REQUIRE(c.kappa_list.size() == 3);
    CHECK(c.kappa_list[2] == 9.0);
  }

  TEST_CASE("errors name the key") {
    auto key_of = [](const std::string &text) {
      try {
        parse_config(text);
      } catch (const ConfigError &e) {
        return e.key();
      }
      return std::string("<none>");
    };
    CHECK(key_of("R = 1\n") == "experiment");
    CHECK(key_of("experiment = oracle\nbogus = 1\n") == "bogus");
    CHECK(key_of("experiment = oracle\nR = 1\nR = 2\n") == "R");
    CHECK(key_of("experiment = oracle\nkappa = -1\n") == "kappa");
    CHECK(key_of("experiment = oracle\ndt = abc\n") == "dt");
    CHECK(key_of("experiment = nope\n") == "experiment");
    CHECK(key_of("experiment = solve-old\nr_max = 3\n") == "r_max");
    CHECK(key_of("experiment = solve-idsa\nsigma_lagging = maybe\n") == "sigma_lagging");
    CHECK_THROWS_AS(parse_config("experiment = oracle\njust words\n"), ConfigError);
  }

  TEST_CASE("override splitting") {
    const auto kv = split_override("kappa=2.5");
    CHECK(kv.first == "kappa");
    CHECK(kv.second == "2.5");
    CHECK_THROWS_AS(split_override("kappa"), ConfigError);
  }

  TEST_CASE("number formatting round-trips") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    const double x = 1.0 / 3.0;
    CHECK(std::stod(format_number(x)) == x);
  }

  TEST_CASE("help lists every key") {
    const auto help = config_help();
    for (const auto &k : config_keys()) CHECK(help.find(k.name) != std::string::npos);
  }
}
